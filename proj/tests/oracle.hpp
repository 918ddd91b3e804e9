#pragma once

// Independent brute-force reference implementations used by the tests. They
// share no code with the library beyond the Value type.

#include <cstddef>
#include <functional>
#include <vector>

#include "lossless/value.hpp"

namespace oracle {

using Row = std::vector<int>;
using Relation = std::vector<Row>;  // sorted, no duplicates

/// Every subset of `universe` (bitmask order).
std::vector<Relation> subsets(const Relation& universe, std::size_t max_size = SIZE_MAX);

/// All rows over {0..k-1}^arity.
Relation cube(int k, int arity);

bool fd_holds(const Relation& r, const std::vector<int>& lhs, const std::vector<int>& rhs);

Relation project(const Relation& r, const std::vector<int>& cols);
Relation natural_join_on(const Relation& l, int lcol, const Relation& r, int rcol);

/// Counts subsets of `universe` within `max_size` satisfying `pred`.
std::size_t count_if_subsets(const Relation& universe, std::size_t max_size,
                             const std::function<bool(const Relation&)>& pred);

}  // namespace oracle
