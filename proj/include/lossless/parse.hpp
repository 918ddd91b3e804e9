#pragma once

#include <string>
#include <string_view>

#include "lossless/algebra.hpp"
#include "lossless/eval.hpp"
#include "lossless/lexer.hpp"
#include "lossless/schema.hpp"

namespace lossless {

// Schema text:
//   relation Emp(ssn, name VALUE, dept VALUE NULLABLE domain {"d1", "d2"})
//   fd Emp: ssn -> name          key Emp(ssn)          mvd Emp: ssn ->> name
//   inclusion A.x <= B.y         inclusion2 A(x, y) <=> B(x, y)
//   domain_in R.a in {1, 2}      domain_not_in R.a in {1}      not_null R.a
//   assert_eq e == e   assert_subset e <= e   assert_disjoint e, e   assert_empty e
Schema parse_schema(std::string_view text);

Expr parse_expr(std::string_view text);
Predicate parse_predicate(std::string_view text);

/// Lines of `Rel(v1, v2, ...)`. Arity and sorts are checked against `schema`;
/// relations without tuples are present and empty.
Instance parse_instance(std::string_view text, const Schema& schema);

/// Lines of `Rel = expr`.
Mapping parse_mapping(std::string_view text);

/// `(v1, v2, ...)` for `sig`; `head` locates arity errors.
Tuple parse_tuple(TokenCursor& cur, const RelationSignature& sig, const SourceToken& head);

std::string read_file(const std::string& path);

}  // namespace lossless
