#include "pattern_util.hpp"

#include <algorithm>

#include "lossless/error.hpp"
#include "lossless/print.hpp"

namespace lossless::detail {

bool contains(const Names& xs, const std::string& x) { return std::find(xs.begin(), xs.end(), x) != xs.end(); }

bool subset_of(const Names& xs, const Names& ys) {
  return std::all_of(xs.begin(), xs.end(), [&](const std::string& x) { return contains(ys, x); });
}

bool same_set(const Names& xs, const Names& ys) { return subset_of(xs, ys) && subset_of(ys, xs); }

Names minus(const Names& xs, const Names& ys) {
  Names out;
  for (const auto& x : xs) {
    if (!contains(ys, x) && !contains(out, x)) out.push_back(x);
  }
  return out;
}

Names intersect(const Names& xs, const Names& ys) {
  Names out;
  for (const auto& x : xs) {
    if (contains(ys, x) && !contains(out, x)) out.push_back(x);
  }
  return out;
}

const RelationSignature& require_relation(const Schema& s, const std::string& name) {
  if (const auto* r = s.find(name)) return *r;
  throw Error(Errc::UnknownRelation, name);
}

void require_attrs(const RelationSignature& r, const Names& attrs) {
  for (const auto& a : attrs) {
    if (!r.find(a)) throw Error(Errc::UnknownAttribute, r.name + "." + a);
  }
}

void require_fresh(const Schema& s, const std::string& name, const std::string& replaced) {
  if (name.empty()) throw Error(Errc::NameClash, "empty relation name");
  if (name != replaced && s.has(name)) throw Error(Errc::NameClash, "relation " + name + " already exists");
}

std::vector<FunctionalDep> fds_on(const Schema& s, const std::string& relation) {
  std::vector<FunctionalDep> out;
  for (const auto& c : s.constraints) {
    if (const auto* fd = std::get_if<FunctionalDep>(&c); fd && fd->relation == relation) out.push_back(*fd);
  }
  return out;
}

std::vector<FunctionalDep> implied_fds(const Schema& s, const std::string& relation) {
  auto out = fds_on(s, relation);
  for (const auto& c : s.constraints) {
    const auto* inc = std::get_if<Inclusion>(&c);
    if (!inc || inc->from.relation != relation || !is_key_correspondence(*inc, s)) continue;
    out.push_back({relation, inc->from.attrs, inc->to.attrs});
    out.push_back({relation, inc->to.attrs, inc->from.attrs});
  }
  return out;
}

Names closure(Names attrs, const std::vector<FunctionalDep>& fds) {
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& fd : fds) {
      if (!subset_of(fd.lhs, attrs)) continue;
      for (const auto& a : fd.rhs) {
        if (!contains(attrs, a)) {
          attrs.push_back(a);
          grew = true;
        }
      }
    }
  }
  return attrs;
}

RelationSignature restrict(const RelationSignature& rel, const std::string& name, const Names& attrs) {
  RelationSignature out{name, {}};
  for (const auto& a : attrs) out.attributes.push_back(*rel.find(a));
  return out;
}

std::vector<RelationSignature> replace_relation(const Schema& s, const std::string& name,
                                                const std::vector<RelationSignature>& replacements) {
  std::vector<RelationSignature> out;
  for (const auto& r : s.relations) {
    if (r.name == name) {
      out.insert(out.end(), replacements.begin(), replacements.end());
    } else {
      out.push_back(r);
    }
  }
  return out;
}

Expr substitute(const Expr& e, const Mapping& views) {
  if (e.kind() == Expr::Kind::RelationRef) {
    const auto* v = views.find(e.relation_name());
    return v ? *v : e;
  }
  std::vector<Expr> children;
  for (const auto& c : e.children()) children.push_back(substitute(c, views));
  return e.with_children(std::move(children));
}

Constraint substitute(const Constraint& c, const Mapping& views) {
  return std::visit(
      [&](const auto& k) -> Constraint {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AlgebraicEmpty>) {
          return AlgebraicEmpty{substitute(k.expr, views)};
        } else if constexpr (std::is_same_v<T, AlgebraicEq> || std::is_same_v<T, AlgebraicSubset> ||
                             std::is_same_v<T, AlgebraicDisjoint>) {
          return T{substitute(k.lhs, views), substitute(k.rhs, views)};
        } else {
          throw Error(Errc::UnsupportedConstraint, "cannot substitute views into " + to_string(Constraint{k}));
        }
      },
      c);
}

void add_identity_views(Mapping& m, const Schema& s, const std::set<std::string>& skip) {
  for (const auto& r : s.relations) {
    if (!skip.count(r.name)) m.views.push_back({r.name, Expr::relation(r.name)});
  }
}

Mapping ordered(const Mapping& m, const Schema& s) {
  Mapping out;
  for (const auto& r : s.relations) {
    if (const auto* e = m.find(r.name)) out.views.push_back({r.name, *e});
  }
  return out;
}

Expr project_if_needed(const Names& attrs, const Names& header, Expr e) {
  if (attrs == header) return e;
  return Expr::project(attrs, std::move(e));
}

void push_unique(std::vector<Constraint>& out, Constraint c) {
  if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
}

}  // namespace lossless::detail
