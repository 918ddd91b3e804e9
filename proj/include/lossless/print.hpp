#pragma once

#include <string>

#include "lossless/algebra.hpp"
#include "lossless/eval.hpp"
#include "lossless/schema.hpp"

namespace lossless {

// Canonical text forms. Every printer here is accepted back by parse.hpp.

std::string to_string(const Predicate& p);
std::string to_string(const Expr& e);
std::string to_string(const Constraint& c);
std::string to_string(const RelationSignature& r);

/// Schema DSL: one statement per line, each ';'-terminated.
std::string print_schema(const Schema& s);

/// `name = expr;` per view.
std::string print_mapping(const Mapping& m);

/// Instance file text, relations in schema order.
std::string print_instance(const Instance& instance, const Schema& schema);

}  // namespace lossless
