#include <algorithm>

#include "lossless/error.hpp"
#include "lossless/print.hpp"
#include "pattern_util.hpp"

namespace lossless {

using namespace detail;

namespace {

Expr union_of_projections(const Names& attrs, const std::string& a, const std::string& b) {
  return Expr::set_union(Expr::project(attrs, Expr::relation(a)), Expr::project(attrs, Expr::relation(b)));
}

Constraint as_algebraic(const Inclusion& inc) {
  Expr l = Expr::project(inc.from.attrs, Expr::relation(inc.from.relation));
  Expr r = Expr::project(inc.to.attrs, Expr::relation(inc.to.relation));
  if (inc.bidirectional) return AlgebraicEq{l, r};
  return AlgebraicSubset{l, r};
}

// Image of an inclusion with an endpoint on the split relation, whose
// projection there is the union of the two branch projections.
Constraint union_image(const Inclusion& inc, const std::string& rel, const std::string& a, const std::string& b) {
  const bool from_split = inc.from.relation == rel;
  const bool to_split = inc.to.relation == rel;
  auto side = [&](const AttrList& e, bool split) {
    return split ? union_of_projections(e.attrs, a, b) : Expr::project(e.attrs, Expr::relation(e.relation));
  };
  Expr from = side(inc.from, from_split);
  Expr to = side(inc.to, to_split);
  if (inc.bidirectional) {
    if (from_split && !to_split) return AlgebraicEq{to, from};
    return AlgebraicEq{from, to};
  }
  return AlgebraicSubset{from, to};
}

bool trivial_condition(const Predicate& p) {
  return p.kind == Predicate::Kind::True || p.kind == Predicate::Kind::False;
}

std::vector<Constraint> condition_constraints(const Predicate& c, const std::string& rel, const std::string& r1,
                                              const std::string& r2) {
  using K = Predicate::Kind;
  auto not_null_empty = [](const std::string& attr, const std::string& r) -> Constraint {
    return AlgebraicEmpty{Expr::select(Predicate::is_not_null(attr), Expr::relation(r))};
  };
  switch (c.kind) {
    case K::True: return {AlgebraicEmpty{Expr::relation(r2)}};
    case K::False: return {AlgebraicEmpty{Expr::relation(r1)}};
    case K::EqConst: return {DomainIn{r1, c.attr, {c.constant}}, DomainNotIn{r2, c.attr, {c.constant}}};
    case K::NeConst: return {DomainNotIn{r1, c.attr, {c.constant}}, DomainIn{r2, c.attr, {c.constant}}};
    case K::IsNull: return {not_null_empty(c.attr, r1), NotNull{r2, c.attr}};
    case K::IsNotNull: return {NotNull{r1, c.attr}, not_null_empty(c.attr, r2)};
    default: throw Error(Errc::UnsupportedCondition, "condition on " + rel + ": " + to_string(c));
  }
}

}  // namespace

CompiledTransform apply_horizontal(const Schema& s, const HorizontalDecomposition& st) {
  const auto& r = require_relation(s, st.relation);
  const auto& cond = st.condition;
  const Names cond_attrs = cond.attributes();
  require_attrs(r, cond_attrs);
  const auto negation = cond.negated();
  if (!negation) throw Error(Errc::UnsupportedCondition, "only atomic conditions can be negated: " + to_string(cond));
  if (cond.kind == Predicate::Kind::EqConst || cond.kind == Predicate::Kind::NeConst) {
    if (r.find(cond.attr)->nullable) {
      throw Error(Errc::UnsupportedCondition,
                  r.name + "." + cond.attr + " is NULLABLE; eliminate its NULLs before splitting on it");
    }
    if (!cond.constant.fits(r.find(cond.attr)->sort)) {
      throw Error(Errc::UnsupportedCondition, "constant " + cond.constant.str() + " does not fit " + cond.attr);
    }
  }
  if (st.first_name == st.second_name) throw Error(Errc::NameClash, "both branches named " + st.first_name);
  require_fresh(s, st.first_name, r.name);
  require_fresh(s, st.second_name, r.name);
  const Names all = r.attribute_names();

  CompiledTransform t;
  t.source = s;
  t.provenance = {st};
  t.target.relations = replace_relation(s, r.name, {restrict(r, st.first_name, all), restrict(r, st.second_name, all)});

  Mapping fwd;
  fwd.views.push_back({st.first_name, Expr::select(cond, Expr::relation(r.name))});
  fwd.views.push_back({st.second_name, Expr::select(*negation, Expr::relation(r.name))});
  add_identity_views(fwd, t.target, {st.first_name, st.second_name});
  t.fwd = ordered(fwd, t.target);

  const Expr r_view = Expr::set_union(Expr::relation(st.first_name), Expr::relation(st.second_name));
  Mapping bwd;
  bwd.views.push_back({r.name, r_view});
  add_identity_views(bwd, s, {r.name});
  t.bwd = ordered(bwd, s);
  const Mapping r_only{{{r.name, r_view}}};

  const auto fds = implied_fds(s, r.name);
  std::vector<Constraint> unrelated, dependencies, others, disjoint;
  for (const auto& c : s.constraints) {
    if (!detail::contains(constraint_relations(c), r.name)) {
      push_unique(unrelated, c);
    } else if (const auto* fd = std::get_if<FunctionalDep>(&c)) {
      push_unique(dependencies, FunctionalDep{st.first_name, fd->lhs, fd->rhs});
      push_unique(dependencies, FunctionalDep{st.second_name, fd->lhs, fd->rhs});
      if (trivial_condition(cond) || subset_of(cond_attrs, fd->lhs) || minus(fd->rhs, fd->lhs).empty()) continue;
      if (!subset_of(cond_attrs, closure(fd->lhs, fds))) {
        throw Error(Errc::UnsupportedCondition,
                    to_string(c) + " relates rows of both branches; the condition must be determined by its lhs");
      }
      push_unique(disjoint, AlgebraicDisjoint{Expr::project(fd->lhs, Expr::relation(st.first_name)),
                                              Expr::project(fd->lhs, Expr::relation(st.second_name))});
    } else if (const auto* m = std::get_if<MultivaluedDep>(&c)) {
      if (!trivial_condition(cond)) throw Error(Errc::UnsupportedConstraint, to_string(c) + " across a split");
      push_unique(dependencies, MultivaluedDep{st.first_name, m->lhs, m->rhs});
      push_unique(dependencies, MultivaluedDep{st.second_name, m->lhs, m->rhs});
    } else if (const auto* inc = std::get_if<Inclusion>(&c)) {
      if (is_key_correspondence(*inc, s)) throw Error(Errc::UnsupportedConstraint, to_string(c) + " across a split");
      if (inc->from.relation == r.name && inc->to.relation == r.name) {
        push_unique(others, substitute(as_algebraic(*inc), r_only));
      } else {
        push_unique(others, union_image(*inc, r.name, st.first_name, st.second_name));
      }
    } else if (const auto* d = std::get_if<DomainIn>(&c)) {
      push_unique(others, DomainIn{st.first_name, d->attr, d->values});
      push_unique(others, DomainIn{st.second_name, d->attr, d->values});
    } else if (const auto* d = std::get_if<DomainNotIn>(&c)) {
      push_unique(others, DomainNotIn{st.first_name, d->attr, d->values});
      push_unique(others, DomainNotIn{st.second_name, d->attr, d->values});
    } else if (const auto* n = std::get_if<NotNull>(&c)) {
      push_unique(others, NotNull{st.first_name, n->attr});
      push_unique(others, NotNull{st.second_name, n->attr});
    } else {
      push_unique(others, substitute(c, r_only));
    }
  }
  auto& out = t.target.constraints;
  out = unrelated;
  for (auto& group : {dependencies, condition_constraints(cond, r.name, st.first_name, st.second_name), others, disjoint}) {
    for (const auto& c : group) push_unique(out, c);
  }
  return t;
}

namespace {

// Attributes x, y with a declared assert_empty sigma[x is null and y is not null](rel).
std::vector<std::pair<std::string, std::string>> co_null_pairs(const Schema& s, const std::string& rel,
                                                               std::vector<std::size_t>* indices) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < s.constraints.size(); ++i) {
    const auto* e = std::get_if<AlgebraicEmpty>(&s.constraints[i]);
    if (!e || e->expr.kind() != Expr::Kind::Select) continue;
    const auto& in = e->expr.child();
    if (in.kind() != Expr::Kind::RelationRef || in.relation_name() != rel) continue;
    const auto& p = e->expr.predicate();
    if (p.kind != Predicate::Kind::And || p.terms.size() != 2) continue;
    const Predicate* null = nullptr;
    const Predicate* not_null = nullptr;
    for (const auto& term : p.terms) {
      if (term.kind == Predicate::Kind::IsNull) null = &term;
      if (term.kind == Predicate::Kind::IsNotNull) not_null = &term;
    }
    if (!null || !not_null) continue;
    out.push_back({null->attr, not_null->attr});
    if (indices) indices->push_back(i);
  }
  return out;
}

}  // namespace

CompiledTransform apply_null_elimination(const Schema& s, const NullElimination& st) {
  const auto& r = require_relation(s, st.relation);
  const Names& elim = st.attrs;
  if (elim.empty()) throw Error(Errc::AttributeNotNullable, "no attribute to eliminate");
  require_attrs(r, elim);
  for (const auto& a : elim) {
    if (!r.find(a)->nullable) throw Error(Errc::AttributeNotNullable, r.name + "." + a);
  }
  const Names all = r.attribute_names();
  const Names rest = minus(all, elim);
  if (rest.empty()) throw Error(Errc::UnsupportedConstraint, "eliminating every attribute of " + r.name);

  std::vector<std::size_t> co_null_indices;
  const auto pairs = co_null_pairs(s, r.name, &co_null_indices);
  for (std::size_t i = 1; i < elim.size(); ++i) {
    for (const auto& want : {std::pair{elim[0], elim[i]}, std::pair{elim[i], elim[0]}}) {
      if (std::find(pairs.begin(), pairs.end(), want) == pairs.end()) {
        throw Error(Errc::UnsupportedConstraint, elim[0] + " and " + elim[i] + " are not declared co-null in " + r.name +
                                                     " (assert_empty sigma[" + want.first + " is null and " +
                                                     want.second + " is not null](" + r.name + "))");
      }
    }
  }
  const bool absorbed = !st.without_name.has_value();
  if (st.without_name) {
    if (*st.without_name == st.with_name) throw Error(Errc::NameClash, "both branches named " + st.with_name);
    require_fresh(s, *st.without_name, r.name);
  }
  require_fresh(s, st.with_name, r.name);

  const auto fds = implied_fds(s, r.name);
  const Inclusion* justifying = nullptr;
  AttrList anchor;  // the table holding every remaining key value, absorbed form
  if (absorbed) {
    if (!subset_of(all, closure(rest, fds))) {
      throw Error(Errc::UnsupportedConstraint, r.name + ": remaining attributes must form a key to absorb NULL rows");
    }
    for (const auto& c : s.constraints) {
      const auto* inc = std::get_if<Inclusion>(&c);
      if (!inc || !inc->bidirectional || inc->from.relation == inc->to.relation) continue;
      if (inc->from.relation == r.name && same_set(inc->from.attrs, rest)) {
        justifying = inc;
        anchor = {inc->to.relation, {}};
        for (const auto& a : rest) {
          auto i = std::find(inc->from.attrs.begin(), inc->from.attrs.end(), a) - inc->from.attrs.begin();
          anchor.attrs.push_back(inc->to.attrs[i]);
        }
      } else if (inc->to.relation == r.name && same_set(inc->to.attrs, rest)) {
        justifying = inc;
        anchor = {inc->from.relation, {}};
        for (const auto& a : rest) {
          auto i = std::find(inc->to.attrs.begin(), inc->to.attrs.end(), a) - inc->to.attrs.begin();
          anchor.attrs.push_back(inc->from.attrs[i]);
        }
      }
      if (justifying) break;
    }
    if (!justifying) {
      throw Error(Errc::UnsupportedConstraint,
                  r.name + ": absorbing NULL rows needs the remaining key in bidirectional inclusion with another table");
    }
  }

  RelationSignature with = restrict(r, st.with_name, all);
  for (auto& a : with.attributes) {
    if (detail::contains(elim, a.name)) a.nullable = false;
  }
  CompiledTransform t;
  t.source = s;
  t.provenance = {st};
  std::vector<RelationSignature> parts;
  if (!absorbed) parts.push_back(restrict(r, *st.without_name, rest));
  parts.push_back(with);
  t.target.relations = replace_relation(s, r.name, parts);

  Mapping fwd;
  if (!absorbed) {
    fwd.views.push_back(
        {*st.without_name, Expr::project(rest, Expr::select(Predicate::is_null(elim[0]), Expr::relation(r.name)))});
  }
  fwd.views.push_back({st.with_name, Expr::select(Predicate::is_not_null(elim[0]), Expr::relation(r.name))});
  add_identity_views(fwd, t.target, {st.with_name, st.without_name.value_or(st.with_name)});
  t.fwd = ordered(fwd, t.target);

  Expr r_view = Expr::relation(r.name);
  if (absorbed) {
    Expr keys = Expr::project(anchor.attrs, Expr::relation(anchor.relation));
    std::vector<RenameItem> renames;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      if (anchor.attrs[i] != rest[i]) renames.push_back({anchor.attrs[i], rest[i], std::nullopt});
    }
    if (!renames.empty()) keys = Expr::rename(renames, keys);
    Names header = rest;
    header.insert(header.end(), elim.begin(), elim.end());
    r_view = project_if_needed(all, header, Expr::outer_join({keys, Expr::relation(st.with_name)}));
  } else {
    std::vector<PadItem> pads;
    for (const auto& a : elim) pads.push_back({a, r.find(a)->sort});
    Names header = rest;
    header.insert(header.end(), elim.begin(), elim.end());
    r_view = Expr::set_union(project_if_needed(all, header, Expr::pad(pads, Expr::relation(*st.without_name))),
                             Expr::relation(st.with_name));
  }
  Mapping bwd;
  bwd.views.push_back({r.name, r_view});
  add_identity_views(bwd, s, {r.name});
  t.bwd = ordered(bwd, s);
  const Mapping r_only{{{r.name, r_view}}};

  std::vector<Constraint> out, disjoint;
  for (std::size_t ci = 0; ci < s.constraints.size(); ++ci) {
    const auto& c = s.constraints[ci];
    if (!detail::contains(constraint_relations(c), r.name)) {
      push_unique(out, c);
      continue;
    }
    if (std::find(co_null_indices.begin(), co_null_indices.end(), ci) != co_null_indices.end()) {
      const auto& p = std::get<AlgebraicEmpty>(c).expr.predicate();
      if (subset_of(p.attributes(), elim)) continue;
    }
    if (const auto* fd = std::get_if<FunctionalDep>(&c)) {
      const Names lhs_elim = intersect(fd->lhs, elim);
      const Names new_rhs = minus(fd->rhs, fd->lhs);
      if (new_rhs.empty()) continue;
      if (absorbed) {
        if (lhs_elim.empty() && !subset_of(rest, fd->lhs)) {
          throw Error(Errc::UnsupportedConstraint, to_string(c) + " also constrains the absorbed NULL rows");
        }
        push_unique(out, FunctionalDep{st.with_name, fd->lhs, new_rhs});
        continue;
      }
      push_unique(out, FunctionalDep{st.with_name, fd->lhs, new_rhs});
      const Names lhs_rest = minus(fd->lhs, elim);
      const Names rhs_rest = minus(minus(fd->rhs, elim), lhs_rest);
      if (!rhs_rest.empty()) {
        if (lhs_rest.empty()) throw Error(Errc::UnsupportedConstraint, to_string(c) + " on the NULL rows");
        push_unique(out, FunctionalDep{*st.without_name, lhs_rest, rhs_rest});
      }
      if (!lhs_elim.empty()) continue;
      if (!intersect(closure(fd->lhs, fds), elim).empty()) {
        push_unique(disjoint, AlgebraicDisjoint{Expr::project(fd->lhs, Expr::relation(*st.without_name)),
                                                Expr::project(fd->lhs, Expr::relation(st.with_name))});
      } else {
        throw Error(Errc::UnsupportedConstraint, to_string(c) + " relates NULL and non-NULL rows");
      }
    } else if (const auto* inc = std::get_if<Inclusion>(&c)) {
      if (inc == justifying) {
        push_unique(out, Inclusion{{st.with_name, rest}, anchor, false});
        continue;
      }
      if (is_key_correspondence(*inc, s)) throw Error(Errc::UnsupportedConstraint, to_string(c) + " across a split");
      auto redirect = [&](const AttrList& e) -> std::optional<AttrList> {
        if (e.relation != r.name) return e;
        if (!subset_of(e.attrs, rest)) return std::nullopt;
        if (!absorbed) return std::nullopt;
        AttrList out_e{anchor.relation, {}};
        for (const auto& a : e.attrs) {
          auto i = std::find(rest.begin(), rest.end(), a) - rest.begin();
          out_e.attrs.push_back(anchor.attrs[i]);
        }
        return out_e;
      };
      auto from = redirect(inc->from);
      auto to = redirect(inc->to);
      if (from && to) {
        push_unique(out, Inclusion{*from, *to, inc->bidirectional});
      } else if (!absorbed && inc->from.relation != inc->to.relation &&
                 subset_of(inc->from.relation == r.name ? inc->from.attrs : inc->to.attrs, rest)) {
        push_unique(out, union_image(*inc, r.name, *st.without_name, st.with_name));
      } else {
        push_unique(out, substitute(as_algebraic(*inc), r_only));
      }
    } else if (const auto* d = std::get_if<DomainIn>(&c)) {
      if (absorbed && !detail::contains(elim, d->attr)) {
        throw Error(Errc::UnsupportedConstraint, to_string(c) + " on absorbed rows");
      }
      if (!absorbed && !detail::contains(elim, d->attr)) push_unique(out, DomainIn{*st.without_name, d->attr, d->values});
      push_unique(out, DomainIn{st.with_name, d->attr, d->values});
    } else if (const auto* d = std::get_if<DomainNotIn>(&c)) {
      if (absorbed && !detail::contains(elim, d->attr)) {
        throw Error(Errc::UnsupportedConstraint, to_string(c) + " on absorbed rows");
      }
      if (!absorbed && !detail::contains(elim, d->attr)) {
        push_unique(out, DomainNotIn{*st.without_name, d->attr, d->values});
      }
      push_unique(out, DomainNotIn{st.with_name, d->attr, d->values});
    } else if (const auto* n = std::get_if<NotNull>(&c)) {
      if (detail::contains(elim, n->attr)) {
        push_unique(out, substitute(AlgebraicEmpty{Expr::select(Predicate::is_null(n->attr), Expr::relation(r.name))},
                                    r_only));
      } else {
        if (!absorbed) push_unique(out, NotNull{*st.without_name, n->attr});
        push_unique(out, NotNull{st.with_name, n->attr});
      }
    } else if (std::holds_alternative<MultivaluedDep>(c)) {
      throw Error(Errc::UnsupportedConstraint, to_string(c) + " across a NULL split");
    } else {
      push_unique(out, substitute(c, r_only));
    }
  }
  for (const auto& c : disjoint) push_unique(out, c);
  t.target.constraints = std::move(out);
  return t;
}

}  // namespace lossless
