#include "lossless/eval.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "lossless/error.hpp"
#include "lossless/print.hpp"

namespace lossless {

std::vector<std::string> column_names(const Header& h) {
  std::vector<std::string> out;
  out.reserve(h.size());
  for (const auto& c : h) out.push_back(c.name);
  return out;
}

Instance Instance::empty_for(const Schema& schema) {
  Instance inst;
  for (const auto& r : schema.relations) inst.relations[r.name];
  return inst;
}

const Rows& Instance::at(const std::string& relation) const {
  static const Rows kEmpty;
  auto it = relations.find(relation);
  return it == relations.end() ? kEmpty : it->second;
}

std::size_t Instance::total_tuples() const {
  std::size_t n = 0;
  for (const auto& [_, rows] : relations) n += rows.size();
  return n;
}

bool Instance::operator==(const Instance& other) const {
  for (const auto& [name, rows] : relations) {
    if (rows != other.at(name)) return false;
  }
  for (const auto& [name, rows] : other.relations) {
    if (rows != at(name)) return false;
  }
  return true;
}

namespace {

std::optional<std::size_t> find_column(const Header& h, const std::string& name) {
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t require_column(const Header& h, const std::string& name) {
  if (auto i = find_column(h, name)) return *i;
  throw Error(Errc::UnknownAttribute, name + " not in [" + [&] {
    std::string s;
    for (const auto& c : h) s += (s.empty() ? "" : ",") + c.name;
    return s;
  }() + "]");
}

void check_predicate(const Predicate& p, const Header& h) {
  using K = Predicate::Kind;
  switch (p.kind) {
    case K::True:
    case K::False: return;
    case K::EqAttr: {
      const auto& a = h[require_column(h, p.attr)];
      const auto& b = h[require_column(h, p.other_attr)];
      if (a.sort != b.sort) throw Error(Errc::SortMismatch, p.attr + " = " + p.other_attr);
      return;
    }
    case K::EqConst:
    case K::NeConst: {
      const auto& a = h[require_column(h, p.attr)];
      if (a.sort.is_oid() || !p.constant.is_const())
        throw Error(Errc::SortMismatch, "comparison of " + p.attr + " with " + p.constant.str());
      return;
    }
    case K::IsNull:
    case K::IsNotNull: require_column(h, p.attr); return;
    case K::And:
      for (const auto& t : p.terms) check_predicate(t, h);
      return;
  }
}

/// Shared columns of a natural join: (left index, right index) pairs.
std::vector<std::pair<std::size_t, std::size_t>> shared_columns(const Header& l, const Header& r) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (auto i = find_column(l, r[j].name)) {
      if (l[*i].sort != r[j].sort) throw Error(Errc::SortMismatch, "join column " + r[j].name);
      out.emplace_back(*i, j);
    }
  }
  return out;
}

Header join_header(const Header& l, const Header& r) {
  Header out = l;
  for (const auto& c : r) {
    if (!find_column(l, c.name)) out.push_back(c);
  }
  return out;
}

}  // namespace

Header header(const Expr& expr, const Schema& schema) {
  using K = Expr::Kind;
  switch (expr.kind()) {
    case K::RelationRef: {
      const auto* rel = schema.find(expr.relation_name());
      if (!rel) throw Error(Errc::UnknownRelation, expr.relation_name());
      Header h;
      for (const auto& a : rel->attributes) h.push_back({a.name, a.sort});
      return h;
    }
    case K::Project: {
      auto in = header(expr.child(), schema);
      Header h;
      for (const auto& a : expr.attrs()) {
        if (find_column(h, a)) throw Error(Errc::HeaderClash, "duplicate projection attribute " + a);
        h.push_back(in[require_column(in, a)]);
      }
      return h;
    }
    case K::Select: {
      auto in = header(expr.child(), schema);
      check_predicate(expr.predicate(), in);
      return in;
    }
    case K::Rename: {
      auto h = header(expr.child(), schema);
      std::vector<bool> touched(h.size(), false);
      // Renames are simultaneous: sources resolve against the input header.
      const auto in = h;
      for (const auto& item : expr.renames()) {
        auto i = require_column(in, item.from);
        if (touched[i]) throw Error(Errc::HeaderClash, "attribute renamed twice: " + item.from);
        touched[i] = true;
        h[i].name = item.to;
        if (item.cast) h[i].sort = *item.cast;
      }
      for (std::size_t i = 0; i < h.size(); ++i) {
        for (std::size_t j = i + 1; j < h.size(); ++j) {
          if (h[i].name == h[j].name) throw Error(Errc::HeaderClash, "rename produces duplicate " + h[i].name);
        }
      }
      return h;
    }
    case K::Product: {
      auto l = header(expr.child(0), schema);
      auto r = header(expr.child(1), schema);
      for (const auto& c : r) {
        if (find_column(l, c.name)) throw Error(Errc::HeaderClash, "product operands share " + c.name);
      }
      l.insert(l.end(), r.begin(), r.end());
      return l;
    }
    case K::NaturalJoin: {
      auto l = header(expr.child(0), schema);
      auto r = header(expr.child(1), schema);
      shared_columns(l, r);
      return join_header(l, r);
    }
    case K::OuterJoin: {
      if (expr.children().empty()) throw Error(Errc::HeaderMismatch, "outer join without operands");
      auto acc = header(expr.child(0), schema);
      for (std::size_t i = 1; i < expr.children().size(); ++i) {
        auto r = header(expr.child(i), schema);
        shared_columns(acc, r);
        acc = join_header(acc, r);
      }
      return acc;
    }
    case K::Union:
    case K::Intersect:
    case K::Difference: {
      auto l = header(expr.child(0), schema);
      auto r = header(expr.child(1), schema);
      if (l != r) throw Error(Errc::HeaderMismatch, "set operands differ: " + to_string(expr));
      return l;
    }
    case K::Pad: {
      auto h = header(expr.child(), schema);
      for (const auto& p : expr.pads()) {
        if (find_column(h, p.name)) throw Error(Errc::HeaderClash, "padded attribute exists: " + p.name);
        h.push_back({p.name, p.sort});
      }
      return h;
    }
  }
  throw Error(Errc::HeaderMismatch, "unknown expression kind");
}

namespace {

using RowPredicate = std::function<bool(const Tuple&)>;

RowPredicate compile(const Predicate& p, const Header& h) {
  using K = Predicate::Kind;
  switch (p.kind) {
    case K::True: return [](const Tuple&) { return true; };
    case K::False: return [](const Tuple&) { return false; };
    case K::EqAttr: {
      auto i = require_column(h, p.attr), j = require_column(h, p.other_attr);
      return [i, j](const Tuple& t) { return t[i].sql_equals(t[j]); };
    }
    case K::EqConst: {
      auto i = require_column(h, p.attr);
      return [i, c = p.constant](const Tuple& t) { return t[i].sql_equals(c); };
    }
    case K::NeConst: {
      auto i = require_column(h, p.attr);
      return [i, c = p.constant](const Tuple& t) { return !t[i].is_null() && !(t[i] == c); };
    }
    case K::IsNull: {
      auto i = require_column(h, p.attr);
      return [i](const Tuple& t) { return t[i].is_null(); };
    }
    case K::IsNotNull: {
      auto i = require_column(h, p.attr);
      return [i](const Tuple& t) { return !t[i].is_null(); };
    }
    case K::And: {
      std::vector<RowPredicate> parts;
      for (const auto& term : p.terms) parts.push_back(compile(term, h));
      return [parts](const Tuple& t) {
        return std::all_of(parts.begin(), parts.end(), [&](const auto& f) { return f(t); });
      };
    }
  }
  return [](const Tuple&) { return false; };
}

Table natural_join(const Table& l, const Table& r, bool outer) {
  auto shared = shared_columns(l.header, r.header);
  Table out{join_header(l.header, r.header), {}};
  std::vector<std::size_t> right_extra;
  for (std::size_t j = 0; j < r.header.size(); ++j) {
    if (!find_column(l.header, r.header[j].name)) right_extra.push_back(j);
  }
  auto key_of = [&](const Tuple& t, bool left, Tuple& key) {
    key.clear();
    for (const auto& [li, rj] : shared) {
      const auto& v = t[left ? li : rj];
      if (v.is_null()) return false;
      key.push_back(v);
    }
    return true;
  };
  std::multimap<Tuple, const Tuple*> index;
  Tuple key;
  for (const auto& rt : r.rows) {
    if (key_of(rt, false, key)) index.emplace(key, &rt);
  }
  std::set<const Tuple*> matched_right;
  for (const auto& lt : l.rows) {
    bool matched = false;
    if (key_of(lt, true, key)) {
      auto [lo, hi] = index.equal_range(key);
      for (auto it = lo; it != hi; ++it) {
        Tuple t = lt;
        for (auto j : right_extra) t.push_back((*it->second)[j]);
        out.rows.insert(std::move(t));
        matched = true;
        matched_right.insert(it->second);
      }
    }
    if (outer && !matched) {
      Tuple t = lt;
      t.resize(out.header.size(), Value::null());
      out.rows.insert(std::move(t));
    }
  }
  if (outer) {
    for (const auto& rt : r.rows) {
      if (matched_right.count(&rt)) continue;
      Tuple t(out.header.size(), Value::null());
      for (const auto& [li, rj] : shared) t[li] = rt[rj];
      for (std::size_t k = 0; k < right_extra.size(); ++k) t[l.header.size() + k] = rt[right_extra[k]];
      out.rows.insert(std::move(t));
    }
  }
  return out;
}

Table eval(const Expr& expr, const Instance& inst, const Schema& schema) {
  using K = Expr::Kind;
  switch (expr.kind()) {
    case K::RelationRef:
      return {header(expr, schema), inst.at(expr.relation_name())};
    case K::Project: {
      auto in = eval(expr.child(), inst, schema);
      std::vector<std::size_t> idx;
      Header h;
      for (const auto& a : expr.attrs()) {
        idx.push_back(require_column(in.header, a));
        h.push_back(in.header[idx.back()]);
      }
      Table out{std::move(h), {}};
      for (const auto& t : in.rows) {
        Tuple p;
        p.reserve(idx.size());
        for (auto i : idx) p.push_back(t[i]);
        out.rows.insert(std::move(p));
      }
      return out;
    }
    case K::Select: {
      auto in = eval(expr.child(), inst, schema);
      check_predicate(expr.predicate(), in.header);
      auto pred = compile(expr.predicate(), in.header);
      for (auto it = in.rows.begin(); it != in.rows.end();) {
        it = pred(*it) ? std::next(it) : in.rows.erase(it);
      }
      return in;
    }
    case K::Rename: {
      auto in = eval(expr.child(), inst, schema);
      Header h = header(expr, schema);
      std::vector<std::optional<Sort>> casts(h.size());
      bool any_cast = false;
      for (const auto& item : expr.renames()) {
        if (item.cast) {
          casts[require_column(in.header, item.from)] = item.cast;
          any_cast = true;
        }
      }
      if (!any_cast) return {std::move(h), std::move(in.rows)};
      Table out{std::move(h), {}};
      for (const auto& t : in.rows) {
        Tuple c = t;
        for (std::size_t i = 0; i < c.size(); ++i) {
          if (casts[i]) c[i] = c[i].cast_to(*casts[i]);
        }
        out.rows.insert(std::move(c));
      }
      return out;
    }
    case K::Product: {
      auto l = eval(expr.child(0), inst, schema);
      auto r = eval(expr.child(1), inst, schema);
      Table out{header(expr, schema), {}};
      for (const auto& a : l.rows) {
        for (const auto& b : r.rows) {
          Tuple t = a;
          t.insert(t.end(), b.begin(), b.end());
          out.rows.insert(std::move(t));
        }
      }
      return out;
    }
    case K::NaturalJoin:
      return natural_join(eval(expr.child(0), inst, schema), eval(expr.child(1), inst, schema), false);
    case K::OuterJoin: {
      auto acc = eval(expr.child(0), inst, schema);
      for (std::size_t i = 1; i < expr.children().size(); ++i) {
        acc = natural_join(acc, eval(expr.child(i), inst, schema), true);
      }
      return acc;
    }
    case K::Union: {
      auto l = eval(expr.child(0), inst, schema);
      auto r = eval(expr.child(1), inst, schema);
      if (l.header != r.header) throw Error(Errc::HeaderMismatch, to_string(expr));
      l.rows.insert(r.rows.begin(), r.rows.end());
      return l;
    }
    case K::Intersect:
    case K::Difference: {
      auto l = eval(expr.child(0), inst, schema);
      auto r = eval(expr.child(1), inst, schema);
      if (l.header != r.header) throw Error(Errc::HeaderMismatch, to_string(expr));
      bool keep_common = expr.kind() == K::Intersect;
      for (auto it = l.rows.begin(); it != l.rows.end();) {
        it = (r.rows.count(*it) > 0) == keep_common ? std::next(it) : l.rows.erase(it);
      }
      return l;
    }
    case K::Pad: {
      auto in = eval(expr.child(), inst, schema);
      Table out{header(expr, schema), {}};
      for (const auto& t : in.rows) {
        Tuple p = t;
        p.resize(out.header.size(), Value::null());
        out.rows.insert(std::move(p));
      }
      return out;
    }
  }
  throw Error(Errc::HeaderMismatch, "unknown expression kind");
}

Rows project_rows(const Rows& rows, const std::vector<std::size_t>& idx) {
  Rows out;
  for (const auto& t : rows) {
    Tuple p;
    for (auto i : idx) p.push_back(t[i]);
    out.insert(std::move(p));
  }
  return out;
}

std::vector<std::size_t> indices(const RelationSignature& rel, const std::vector<std::string>& attrs) {
  std::vector<std::size_t> out;
  for (const auto& a : attrs) {
    auto i = rel.index_of(a);
    if (!i) throw Error(Errc::UnknownAttribute, rel.name + "." + a);
    out.push_back(*i);
  }
  return out;
}

bool fd_holds(const Rows& rows, const std::vector<std::size_t>& lhs, const std::vector<std::size_t>& rhs) {
  std::map<Tuple, Tuple> seen;
  for (const auto& t : rows) {
    Tuple k, v;
    for (auto i : lhs) k.push_back(t[i]);
    for (auto i : rhs) v.push_back(t[i]);
    auto [it, inserted] = seen.emplace(std::move(k), v);
    if (!inserted && it->second != v) return false;
  }
  return true;
}

bool subset(const Rows& a, const Rows& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

Table evaluate(const Expr& expr, const Instance& instance, const Schema& schema) {
  header(expr, schema);
  return eval(expr, instance, schema);
}

Instance apply_mapping(const Mapping& mapping, const Instance& instance, const Schema& source) {
  Instance out;
  for (const auto& v : mapping.views) out.relations[v.relation] = eval(v.expr, instance, source).rows;
  return out;
}

bool check_constraint(const Constraint& c, const Instance& instance, const Schema& schema) {
  return std::visit(
      [&](const auto& k) -> bool {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, FunctionalDep>) {
          const auto& rel = schema.at(k.relation);
          return fd_holds(instance.at(k.relation), indices(rel, k.lhs), indices(rel, k.rhs));
        } else if constexpr (std::is_same_v<T, MultivaluedDep>) {
          const auto& rel = schema.at(k.relation);
          auto x = indices(rel, k.lhs);
          std::vector<std::size_t> y, z;
          for (std::size_t i = 0; i < rel.arity(); ++i) {
            bool in_x = std::find(x.begin(), x.end(), i) != x.end();
            bool in_y = std::find(k.rhs.begin(), k.rhs.end(), rel.attributes[i].name) != k.rhs.end();
            if (in_x) continue;
            (in_y ? y : z).push_back(i);
          }
          std::map<Tuple, std::pair<std::set<Tuple>, std::set<Tuple>>> groups;
          std::map<Tuple, std::size_t> counts;
          for (const auto& t : instance.at(k.relation)) {
            Tuple kx, ky, kz;
            for (auto i : x) kx.push_back(t[i]);
            for (auto i : y) ky.push_back(t[i]);
            for (auto i : z) kz.push_back(t[i]);
            auto& g = groups[kx];
            g.first.insert(std::move(ky));
            g.second.insert(std::move(kz));
            ++counts[kx];
          }
          for (const auto& [kx, g] : groups) {
            if (counts[kx] != g.first.size() * g.second.size()) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, Inclusion>) {
          const auto& fr = schema.at(k.from.relation);
          const auto& tr = schema.at(k.to.relation);
          if (is_key_correspondence(k, schema)) {
            auto a = indices(fr, k.from.attrs), b = indices(fr, k.to.attrs);
            const auto& rows = instance.at(fr.name);
            return fd_holds(rows, a, b) && fd_holds(rows, b, a);
          }
          auto a = project_rows(instance.at(fr.name), indices(fr, k.from.attrs));
          auto b = project_rows(instance.at(tr.name), indices(tr, k.to.attrs));
          return subset(a, b) && (!k.bidirectional || subset(b, a));
        } else if constexpr (std::is_same_v<T, DomainIn> || std::is_same_v<T, DomainNotIn>) {
          const auto& rel = schema.at(k.relation);
          auto i = indices(rel, {k.attr})[0];
          for (const auto& t : instance.at(k.relation)) {
            if (t[i].is_null()) continue;
            bool member = std::find(k.values.begin(), k.values.end(), t[i]) != k.values.end();
            if (member != std::is_same_v<T, DomainIn>) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, NotNull>) {
          auto i = indices(schema.at(k.relation), {k.attr})[0];
          const auto& rows = instance.at(k.relation);
          return std::none_of(rows.begin(), rows.end(), [i](const Tuple& t) { return t[i].is_null(); });
        } else if constexpr (std::is_same_v<T, AlgebraicEmpty>) {
          return eval(k.expr, instance, schema).rows.empty();
        } else {
          auto l = eval(k.lhs, instance, schema).rows;
          auto r = eval(k.rhs, instance, schema).rows;
          if constexpr (std::is_same_v<T, AlgebraicEq>) {
            return l == r;
          } else if constexpr (std::is_same_v<T, AlgebraicSubset>) {
            return subset(l, r);
          } else {
            return std::none_of(l.begin(), l.end(), [&](const Tuple& t) { return r.count(t) > 0; });
          }
        }
      },
      c);
}

int first_violation(const Schema& schema, const Instance& instance) {
  for (std::size_t i = 0; i < schema.constraints.size(); ++i) {
    if (!check_constraint(schema.constraints[i], instance, schema)) return static_cast<int>(i);
  }
  return -1;
}

bool conforms(const Schema& schema, const Instance& instance) {
  for (const auto& [name, rows] : instance.relations) {
    const auto* rel = schema.find(name);
    if (!rel) return false;
    for (const auto& t : rows) {
      if (t.size() != rel->arity()) return false;
      for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& a = rel->attributes[i];
        if (t[i].is_null() && !a.nullable) return false;
        if (!t[i].fits(a.sort)) return false;
      }
    }
  }
  return true;
}

}  // namespace lossless
