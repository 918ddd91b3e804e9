#pragma once

// Helpers shared by the transformation patterns.

#include <set>
#include <string>
#include <vector>

#include "lossless/patterns.hpp"

namespace lossless::detail {

using Names = std::vector<std::string>;

bool contains(const Names& xs, const std::string& x);
bool subset_of(const Names& xs, const Names& ys);
bool same_set(const Names& xs, const Names& ys);
Names minus(const Names& xs, const Names& ys);
Names intersect(const Names& xs, const Names& ys);

const RelationSignature& require_relation(const Schema& s, const std::string& name);
void require_attrs(const RelationSignature& r, const Names& attrs);
void require_fresh(const Schema& s, const std::string& name, const std::string& replaced);

std::vector<FunctionalDep> fds_on(const Schema& s, const std::string& relation);
/// fds_on plus both directions of every OID/key correspondence on `relation`.
std::vector<FunctionalDep> implied_fds(const Schema& s, const std::string& relation);
Names closure(Names attrs, const std::vector<FunctionalDep>& fds);

/// `rel` restricted to `attrs`, in the order given.
RelationSignature restrict(const RelationSignature& rel, const std::string& name, const Names& attrs);

/// Relations of `s` with `name` replaced, in place, by `replacements`.
std::vector<RelationSignature> replace_relation(const Schema& s, const std::string& name,
                                                const std::vector<RelationSignature>& replacements);

/// Replaces the relation references found in `views`; other references stay.
Expr substitute(const Expr& e, const Mapping& views);

/// Algebraic constraint with every relation reference substituted.
Constraint substitute(const Constraint& c, const Mapping& views);

/// Identity views for the relations of `s` except those in `skip`.
void add_identity_views(Mapping& m, const Schema& s, const std::set<std::string>& skip);

/// Views of `m` reordered to follow the relation order of `s`.
Mapping ordered(const Mapping& m, const Schema& s);

/// π over `attrs` unless the header of `e` already is `attrs`.
Expr project_if_needed(const Names& attrs, const Names& header, Expr e);

void push_unique(std::vector<Constraint>& out, Constraint c);

}  // namespace lossless::detail
