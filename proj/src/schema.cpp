#include "lossless/schema.hpp"

#include <algorithm>
#include <set>

#include "lossless/error.hpp"
#include "lossless/eval.hpp"
#include "lossless/print.hpp"

namespace lossless {

std::optional<std::size_t> RelationSignature::index_of(const std::string& attr) const {
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    if (attributes[i].name == attr) return i;
  }
  return std::nullopt;
}

const AttributeSpec* RelationSignature::find(const std::string& attr) const {
  auto i = index_of(attr);
  return i ? &attributes[*i] : nullptr;
}

std::vector<std::string> RelationSignature::attribute_names() const {
  std::vector<std::string> out;
  out.reserve(attributes.size());
  for (const auto& a : attributes) out.push_back(a.name);
  return out;
}

const RelationSignature* Schema::find(const std::string& name) const {
  for (const auto& r : relations) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

const RelationSignature& Schema::at(const std::string& name) const {
  if (const auto* r = find(name)) return *r;
  throw Error(Errc::UnknownRelation, name);
}

std::vector<std::string> Schema::relation_names() const {
  std::vector<std::string> out;
  for (const auto& r : relations) out.push_back(r.name);
  return out;
}

const Expr* Mapping::find(const std::string& relation) const {
  for (const auto& v : views) {
    if (v.relation == relation) return &v.expr;
  }
  return nullptr;
}

const Expr& Mapping::at(const std::string& relation) const {
  if (const auto* e = find(relation)) return *e;
  throw Error(Errc::MissingView, "relation " + relation + " has no view");
}

Mapping Mapping::identity(const Schema& schema) {
  Mapping m;
  for (const auto& r : schema.relations) m.views.push_back({r.name, Expr::relation(r.name)});
  return m;
}

std::vector<std::string> constraint_relations(const Constraint& c) {
  std::vector<std::string> out;
  auto add = [&](const std::string& r) {
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  };
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Inclusion>) {
          add(k.from.relation);
          add(k.to.relation);
        } else if constexpr (std::is_same_v<T, AlgebraicEmpty>) {
          for (const auto& r : k.expr.relations()) add(r);
        } else if constexpr (std::is_same_v<T, AlgebraicEq> || std::is_same_v<T, AlgebraicSubset> ||
                             std::is_same_v<T, AlgebraicDisjoint>) {
          for (const auto& r : k.lhs.relations()) add(r);
          for (const auto& r : k.rhs.relations()) add(r);
        } else {
          add(k.relation);
        }
      },
      c);
  return out;
}

bool is_key_correspondence(const Inclusion& inc, const Schema& schema) {
  if (!inc.bidirectional || inc.from.relation != inc.to.relation) return false;
  if (inc.from.attrs.size() != 1 || inc.to.attrs.size() != 1) return false;
  const auto* rel = schema.find(inc.from.relation);
  if (!rel) return false;
  const auto* a = rel->find(inc.from.attrs[0]);
  const auto* b = rel->find(inc.to.attrs[0]);
  return a && b && a->sort.is_oid() != b->sort.is_oid();
}

namespace {

class SchemaValidator {
 public:
  explicit SchemaValidator(const Schema& s) : schema_(s) {}

  std::vector<Diagnostic> run() {
    if (schema_.relations.empty()) report("schema", "no relations", "");
    std::set<std::string> seen;
    for (const auto& r : schema_.relations) {
      if (!seen.insert(r.name).second) report(r.name, "duplicate relation", "");
      check_relation(r);
    }
    for (const auto& c : schema_.constraints) check_constraint(c);
    return std::move(out_);
  }

 private:
  void report(std::string subject, std::string rule, std::string msg) {
    out_.push_back({std::move(subject), std::move(rule), std::move(msg)});
  }

  void check_relation(const RelationSignature& r) {
    if (r.attributes.empty()) report(r.name, "no attributes", "");
    std::set<std::string> names;
    for (const auto& a : r.attributes) {
      if (!names.insert(a.name).second) report(r.name, "duplicate attribute", a.name);
      if (a.enum_domain) {
        for (const auto& v : *a.enum_domain) {
          if (v.is_null() || !v.fits(a.sort)) report(r.name + "." + a.name, "sort mismatch", "domain value " + v.str());
        }
      }
    }
  }

  const AttributeSpec* attr(const std::string& subject, const std::string& rel, const std::string& name) {
    const auto* r = schema_.find(rel);
    if (!r) {
      report(subject, "unknown relation", rel);
      return nullptr;
    }
    const auto* a = r->find(name);
    if (!a) report(subject, "unknown attribute", rel + "." + name);
    return a;
  }

  bool attrs_ok(const std::string& subject, const std::string& rel, const std::vector<std::string>& names) {
    if (!schema_.find(rel)) {
      report(subject, "unknown relation", rel);
      return false;
    }
    bool ok = true;
    for (const auto& n : names) ok = attr(subject, rel, n) != nullptr && ok;
    return ok;
  }

  void check_constraint(const Constraint& c) {
    const std::string subject = to_string(c);
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, FunctionalDep> || std::is_same_v<T, MultivaluedDep>) {
            std::vector<std::string> all = k.lhs;
            all.insert(all.end(), k.rhs.begin(), k.rhs.end());
            attrs_ok(subject, k.relation, all);
          } else if constexpr (std::is_same_v<T, Inclusion>) {
            check_inclusion(subject, k);
          } else if constexpr (std::is_same_v<T, DomainIn> || std::is_same_v<T, DomainNotIn>) {
            if (const auto* a = attr(subject, k.relation, k.attr)) {
              if (a->sort.is_oid()) report(subject, "sort mismatch", "domain constraint on OID attribute");
            }
            for (const auto& v : k.values) {
              if (!v.is_const()) report(subject, "sort mismatch", "non-constant " + v.str());
            }
          } else if constexpr (std::is_same_v<T, NotNull>) {
            attr(subject, k.relation, k.attr);
          } else if constexpr (std::is_same_v<T, AlgebraicEmpty>) {
            header_of(subject, k.expr);
          } else {
            auto l = header_of(subject, k.lhs);
            auto r = header_of(subject, k.rhs);
            if (l && r) compatible(subject, *l, *r);
          }
        },
        c);
  }

  void check_inclusion(const std::string& subject, const Inclusion& inc) {
    bool ok = attrs_ok(subject, inc.from.relation, inc.from.attrs);
    ok = attrs_ok(subject, inc.to.relation, inc.to.attrs) && ok;
    if (!ok) return;
    if (inc.from.attrs.size() != inc.to.attrs.size()) {
      report(subject, "arity mismatch", std::to_string(inc.from.attrs.size()) + " vs " + std::to_string(inc.to.attrs.size()));
      return;
    }
    if (inc.from.attrs.empty()) report(subject, "arity mismatch", "empty inclusion");
    if (is_key_correspondence(inc, schema_)) return;
    const auto& fr = schema_.at(inc.from.relation);
    const auto& tr = schema_.at(inc.to.relation);
    for (std::size_t i = 0; i < inc.from.attrs.size(); ++i) {
      if (fr.find(inc.from.attrs[i])->sort != tr.find(inc.to.attrs[i])->sort) {
        report(subject, "sort mismatch", inc.from.attrs[i] + " vs " + inc.to.attrs[i]);
      }
    }
  }

  std::optional<Header> header_of(const std::string& subject, const Expr& e) {
    try {
      return header(e, schema_);
    } catch (const Error& err) {
      report(subject, "ill-formed expression", err.what());
      return std::nullopt;
    }
  }

  void compatible(const std::string& subject, const Header& l, const Header& r) {
    if (l.size() != r.size()) {
      report(subject, "arity mismatch", std::to_string(l.size()) + " vs " + std::to_string(r.size()));
      return;
    }
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (l[i].sort != r[i].sort) report(subject, "sort mismatch", l[i].name + " vs " + r[i].name);
    }
  }

  const Schema& schema_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate_schema(const Schema& schema) { return SchemaValidator(schema).run(); }

std::vector<Diagnostic> validate_mapping(const Schema& source, const Schema& target, const Mapping& mapping) {
  std::vector<Diagnostic> out;
  std::set<std::string> seen;
  for (const auto& v : mapping.views) {
    if (!seen.insert(v.relation).second) out.push_back({v.relation, "duplicate view", ""});
    const auto* rel = target.find(v.relation);
    if (!rel) {
      out.push_back({v.relation, "view for unknown target relation", ""});
      continue;
    }
    bool refs_ok = true;
    for (const auto& r : v.expr.relations()) {
      if (!source.has(r)) {
        out.push_back({v.relation, "view references non-source relation", r});
        refs_ok = false;
      }
    }
    if (!refs_ok) continue;
    Header h;
    try {
      h = header(v.expr, source);
    } catch (const Error& err) {
      out.push_back({v.relation, "ill-formed view", err.what()});
      continue;
    }
    if (h.size() != rel->arity()) {
      out.push_back({v.relation, "arity mismatch", std::to_string(h.size()) + " vs " + std::to_string(rel->arity())});
      continue;
    }
    for (std::size_t i = 0; i < h.size(); ++i) {
      const auto& a = rel->attributes[i];
      if (h[i].name != a.name) out.push_back({v.relation, "attribute name mismatch", h[i].name + " vs " + a.name});
      if (h[i].sort != a.sort) out.push_back({v.relation, "sort mismatch", h[i].name + ": " + h[i].sort.str() + " vs " + a.sort.str()});
    }
  }
  for (const auto& r : target.relations) {
    if (!mapping.find(r.name)) out.push_back({r.name, "relation " + r.name + " has no view", ""});
  }
  return out;
}

}  // namespace lossless
