#pragma once

#include "lossless/algebra.hpp"
#include "lossless/schema.hpp"

namespace lossless {

/// Replaces every relation reference of `query` by its view in `views`.
/// Throws MissingView.
Expr unfold_query(const Expr& query, const Mapping& views);

/// Applies `views` to every view of `outer`: the result defines outer's
/// relations directly over the relations `views` is written against.
Mapping unfold_mapping(const Mapping& outer, const Mapping& views);

/// Semantics-preserving cleanup used to compare composed views textually:
/// merges stacked projections, selections and renames, drops identity
/// projections and renames, and moves projections below renames and
/// selections below projections. `schema` types the relation references.
Expr normalize(const Expr& expr, const Schema& schema);

Mapping normalize(const Mapping& mapping, const Schema& schema);

}  // namespace lossless
