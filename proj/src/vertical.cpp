#include <algorithm>

#include "lossless/error.hpp"
#include "lossless/print.hpp"
#include "pattern_util.hpp"

namespace lossless {

using namespace detail;

namespace {

bool has_duplicates(Names xs) {
  std::sort(xs.begin(), xs.end());
  return std::adjacent_find(xs.begin(), xs.end()) != xs.end();
}

// σ/π chains over a single reference to `rel`, whose attributes all lie in `side`.
std::optional<Expr> retarget_selection(const Expr& e, const std::string& rel, const std::string& side,
                                       const Names& side_attrs) {
  switch (e.kind()) {
    case Expr::Kind::RelationRef:
      if (e.relation_name() == rel) return Expr::relation(side);
      return std::nullopt;
    case Expr::Kind::Select: {
      if (!subset_of(e.predicate().attributes(), side_attrs)) return std::nullopt;
      auto in = retarget_selection(e.child(), rel, side, side_attrs);
      if (!in) return std::nullopt;
      return Expr::select(e.predicate(), *in);
    }
    case Expr::Kind::Project: {
      if (!subset_of(e.attrs(), side_attrs)) return std::nullopt;
      auto in = retarget_selection(e.child(), rel, side, side_attrs);
      if (!in) return std::nullopt;
      return Expr::project(e.attrs(), *in);
    }
    default: return std::nullopt;
  }
}

}  // namespace

CompiledTransform apply_vertical(const Schema& s, const VerticalDecomposition& st) {
  const auto& p = require_relation(s, st.relation);
  require_attrs(p, st.left);
  require_attrs(p, st.right);
  require_attrs(p, st.shared);
  const Names all = p.attribute_names();
  Names both = st.left;
  both.insert(both.end(), st.right.begin(), st.right.end());
  if (has_duplicates(st.left) || has_duplicates(st.right) || !same_set(both, all)) {
    throw Error(Errc::AttributePartitionInvalid, "left and right attributes must cover " + p.name + " exactly");
  }
  if (!same_set(st.shared, intersect(st.left, st.right))) {
    throw Error(Errc::AttributePartitionInvalid, "shared attributes must be the overlap of left and right");
  }
  if (st.left_name == st.right_name) throw Error(Errc::NameClash, "both sides named " + st.left_name);
  require_fresh(s, st.left_name, p.name);
  require_fresh(s, st.right_name, p.name);
  if (st.shared.empty()) throw Error(Errc::NoJustifyingDependency, "split of " + p.name + " shares no attributes");

  const auto fds = fds_on(s, p.name);
  const auto implied = implied_fds(s, p.name);
  const Names cl = closure(st.shared, implied);
  const MultivaluedDep* justifying_mvd = nullptr;
  if (!subset_of(st.left, cl) && !subset_of(st.right, cl)) {
    for (const auto& c : s.constraints) {
      const auto* m = std::get_if<MultivaluedDep>(&c);
      if (!m || m->relation != p.name || !same_set(m->lhs, st.shared)) continue;
      if (same_set(m->rhs, minus(st.left, st.shared)) || same_set(m->rhs, minus(st.right, st.shared))) {
        justifying_mvd = m;
        break;
      }
    }
    if (!justifying_mvd) {
      throw Error(Errc::NoJustifyingDependency,
                  p.name + ": no dependency makes (" + to_string(Constraint{FunctionalDep{p.name, st.shared, {}}}) +
                      ") determine either side");
    }
  }

  CompiledTransform t;
  t.source = s;
  t.provenance = {st};
  t.target.relations =
      replace_relation(s, p.name, {restrict(p, st.left_name, st.left), restrict(p, st.right_name, st.right)});

  Mapping fwd;
  fwd.views.push_back({st.left_name, Expr::project(st.left, Expr::relation(p.name))});
  fwd.views.push_back({st.right_name, Expr::project(st.right, Expr::relation(p.name))});
  add_identity_views(fwd, t.target, {st.left_name, st.right_name});
  t.fwd = ordered(fwd, t.target);

  Names join_header = st.left;
  for (const auto& a : st.right) {
    if (!contains(join_header, a)) join_header.push_back(a);
  }
  Mapping bwd;
  const Expr p_view =
      project_if_needed(all, join_header, Expr::join(Expr::relation(st.left_name), Expr::relation(st.right_name)));
  bwd.views.push_back({p.name, p_view});
  add_identity_views(bwd, s, {p.name});
  t.bwd = ordered(bwd, s);
  const Mapping p_only{{{p.name, p_view}}};

  // FD images: every rhs attribute goes to a side containing the whole dependency.
  std::vector<FunctionalDep> projected;
  struct Image {
    FunctionalDep left, right;
    std::vector<FunctionalDep> derived;
  };
  std::vector<Image> images;
  struct Unplaced {
    Names lhs;
    std::string attr;
    std::size_t image;
  };
  std::vector<Unplaced> unplaced;
  for (const auto& fd : fds) {
    Image img{{st.left_name, fd.lhs, {}}, {st.right_name, fd.lhs, {}}, {}};
    for (const auto& y : fd.rhs) {
      if (contains(fd.lhs, y)) continue;
      Names dep = fd.lhs;
      dep.push_back(y);
      if (subset_of(dep, st.left)) {
        img.left.rhs.push_back(y);
      } else if (subset_of(dep, st.right)) {
        img.right.rhs.push_back(y);
      } else {
        unplaced.push_back({fd.lhs, y, images.size()});
      }
    }
    if (!img.left.rhs.empty()) projected.push_back(img.left);
    if (!img.right.rhs.empty()) projected.push_back(img.right);
    images.push_back(img);
  }
  // Correspondences stay inside one side, so they keep holding there.
  for (const auto& fd : implied) {
    if (std::find(fds.begin(), fds.end(), fd) != fds.end()) continue;
    Names dep = fd.lhs;
    dep.insert(dep.end(), fd.rhs.begin(), fd.rhs.end());
    if (subset_of(dep, st.left) || subset_of(dep, st.right)) projected.push_back(fd);
  }
  for (const auto& [lhs, y, i] : unplaced) {
    if (contains(closure(lhs, projected), y)) continue;
    // shared -> y lands on y's side and may restore the dependency.
    if (!contains(st.shared, y) && contains(cl, y)) {
      FunctionalDep d{contains(st.left, y) ? st.left_name : st.right_name, st.shared, {y}};
      projected.push_back(d);
      images[i].derived.push_back(d);
    }
    if (!contains(closure(lhs, projected), y)) {
      throw Error(Errc::UnsupportedConstraint,
                  "fd " + p.name + ": ... -> " + y + " is not preserved by the split of " + p.name);
    }
  }

  auto endpoint = [&](const AttrList& a) -> AttrList {
    if (a.relation != p.name) return a;
    if (subset_of(a.attrs, st.left)) return {st.left_name, a.attrs};
    if (subset_of(a.attrs, st.right)) return {st.right_name, a.attrs};
    throw Error(Errc::UnsupportedConstraint, "inclusion on " + p.name + " spans both sides of the split");
  };
  auto side_of = [&](const std::string& attr) { return contains(st.left, attr) ? st.left_name : st.right_name; };

  std::vector<Constraint> out;
  std::size_t fd_index = 0;
  for (const auto& c : s.constraints) {
    auto rels = constraint_relations(c);
    if (!contains(rels, p.name)) {
      push_unique(out, c);
      continue;
    }
    if (const auto* fd = std::get_if<FunctionalDep>(&c)) {
      (void)fd;
      const auto& img = images[fd_index++];
      if (!img.left.rhs.empty()) push_unique(out, img.left);
      if (!img.right.rhs.empty()) push_unique(out, img.right);
      for (const auto& d : img.derived) push_unique(out, d);
    } else if (const auto* m = std::get_if<MultivaluedDep>(&c)) {
      if (m == justifying_mvd) continue;
      Names dep = m->lhs;
      dep.insert(dep.end(), m->rhs.begin(), m->rhs.end());
      if (subset_of(dep, st.left) && same_set(dep, st.left)) {
        push_unique(out, MultivaluedDep{st.left_name, m->lhs, m->rhs});
      } else if (subset_of(dep, st.right) && same_set(dep, st.right)) {
        push_unique(out, MultivaluedDep{st.right_name, m->lhs, m->rhs});
      } else {
        throw Error(Errc::UnsupportedConstraint, to_string(c) + " is not preserved by the split");
      }
    } else if (const auto* inc = std::get_if<Inclusion>(&c)) {
      Inclusion img{endpoint(inc->from), endpoint(inc->to), inc->bidirectional};
      if (img.from != img.to) push_unique(out, img);
    } else if (const auto* d = std::get_if<DomainIn>(&c)) {
      push_unique(out, DomainIn{side_of(d->attr), d->attr, d->values});
    } else if (const auto* d = std::get_if<DomainNotIn>(&c)) {
      push_unique(out, DomainNotIn{side_of(d->attr), d->attr, d->values});
    } else if (const auto* n = std::get_if<NotNull>(&c)) {
      push_unique(out, NotNull{side_of(n->attr), n->attr});
    } else if (const auto* e = std::get_if<AlgebraicEmpty>(&c)) {
      auto moved = retarget_selection(e->expr, p.name, st.left_name, st.left);
      if (!moved) moved = retarget_selection(e->expr, p.name, st.right_name, st.right);
      push_unique(out, moved ? Constraint{AlgebraicEmpty{*moved}} : substitute(c, p_only));
    } else {
      push_unique(out, substitute(c, p_only));
    }
  }
  push_unique(out, Inclusion{{st.left_name, st.shared}, {st.right_name, st.shared}, true});
  t.target.constraints = std::move(out);
  return t;
}

}  // namespace lossless
