#include "lossless/rewrite.hpp"

#include <algorithm>

#include "lossless/error.hpp"
#include "lossless/eval.hpp"

namespace lossless {

Expr unfold_query(const Expr& query, const Mapping& views) {
  if (query.kind() == Expr::Kind::RelationRef) {
    const auto* v = views.find(query.relation_name());
    if (!v) throw Error(Errc::MissingView, "relation " + query.relation_name() + " has no view");
    return *v;
  }
  std::vector<Expr> children;
  children.reserve(query.children().size());
  for (const auto& c : query.children()) children.push_back(unfold_query(c, views));
  return query.with_children(std::move(children));
}

Mapping unfold_mapping(const Mapping& outer, const Mapping& views) {
  Mapping out;
  for (const auto& v : outer.views) out.views.push_back({v.relation, unfold_query(v.expr, views)});
  return out;
}

namespace {

using K = Expr::Kind;

std::vector<RenameItem> without_identities(const std::vector<RenameItem>& items) {
  std::vector<RenameItem> out;
  for (const auto& r : items) {
    if (r.from != r.to || r.cast) out.push_back(r);
  }
  return out;
}

// outer applied after inner, both simultaneous.
std::vector<RenameItem> compose_renames(const std::vector<RenameItem>& outer, const std::vector<RenameItem>& inner) {
  std::vector<RenameItem> out;
  std::vector<bool> used(outer.size(), false);
  for (const auto& in : inner) {
    RenameItem r = in;
    for (std::size_t i = 0; i < outer.size(); ++i) {
      if (outer[i].from == in.to) {
        r.to = outer[i].to;
        if (outer[i].cast) r.cast = outer[i].cast;
        used[i] = true;
      }
    }
    out.push_back(r);
  }
  for (std::size_t i = 0; i < outer.size(); ++i) {
    if (!used[i]) out.push_back(outer[i]);
  }
  return without_identities(out);
}

class Normalizer {
 public:
  explicit Normalizer(const Schema& s) : schema_(s) {}

  Expr run(const Expr& e) {
    std::vector<Expr> children;
    for (const auto& c : e.children()) children.push_back(run(c));
    return local(e.kind() == K::RelationRef ? e : e.with_children(std::move(children)));
  }

 private:
  // Children are already normal.
  Expr local(const Expr& e) {
    switch (e.kind()) {
      case K::Project: return project(e.attrs(), e.child());
      case K::Select: return select(e.predicate(), e.child());
      case K::Rename: return rename(e.renames(), e.child());
      default: return e;
    }
  }

  Expr project(const std::vector<std::string>& attrs, const Expr& in) {
    if (column_names(header(in, schema_)) == attrs) return in;
    switch (in.kind()) {
      case K::Project: return project(attrs, in.child());
      case K::Rename: {
        std::vector<std::string> inner;
        std::vector<RenameItem> kept;
        for (const auto& a : attrs) {
          auto it = std::find_if(in.renames().begin(), in.renames().end(), [&](const RenameItem& r) { return r.to == a; });
          if (it == in.renames().end()) {
            inner.push_back(a);
          } else {
            inner.push_back(it->from);
            kept.push_back(*it);
          }
        }
        return rename(kept, project(inner, in.child()));
      }
      default: return Expr::project(attrs, in);
    }
  }

  Expr select(const Predicate& p, const Expr& in) {
    if (p.kind == Predicate::Kind::True) return in;
    switch (in.kind()) {
      case K::Project: return project(in.attrs(), select(p, in.child()));
      case K::Select: return Expr::select(Predicate::conjunction({in.predicate(), p}), in.child());
      default: return Expr::select(p, in);
    }
  }

  Expr rename(const std::vector<RenameItem>& items, const Expr& in) {
    auto cleaned = without_identities(items);
    if (cleaned.empty()) return in;
    if (in.kind() == K::Rename) return rename(compose_renames(cleaned, in.renames()), in.child());
    return Expr::rename(std::move(cleaned), in);
  }

  const Schema& schema_;
};

}  // namespace

Expr normalize(const Expr& expr, const Schema& schema) { return Normalizer(schema).run(expr); }

Mapping normalize(const Mapping& mapping, const Schema& schema) {
  Mapping out;
  for (const auto& v : mapping.views) out.views.push_back({v.relation, normalize(v.expr, schema)});
  return out;
}

}  // namespace lossless
