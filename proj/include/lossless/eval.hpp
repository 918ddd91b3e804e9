#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "lossless/algebra.hpp"
#include "lossless/schema.hpp"

namespace lossless {

struct Column {
  std::string name;
  Sort sort;
  bool operator==(const Column&) const = default;
};

using Header = std::vector<Column>;

std::vector<std::string> column_names(const Header& h);

using Rows = std::set<Tuple>;

/// Finite database instance: relation name -> set of tuples.
struct Instance {
  std::map<std::string, Rows> relations;

  /// Every relation of `schema` present and empty.
  static Instance empty_for(const Schema& schema);

  const Rows& at(const std::string& relation) const;
  Rows& operator[](const std::string& relation) { return relations[relation]; }
  std::size_t total_tuples() const;

  /// Per-relation set equality; absent relations count as empty.
  bool operator==(const Instance& other) const;
};

struct Table {
  Header header;
  Rows rows;
};

/// Output header of `expr`; throws UnknownRelation, UnknownAttribute,
/// HeaderClash, HeaderMismatch or SortMismatch.
Header header(const Expr& expr, const Schema& schema);

Table evaluate(const Expr& expr, const Instance& instance, const Schema& schema);

/// Evaluates every view of `mapping` over `instance` (an instance of `source`).
Instance apply_mapping(const Mapping& mapping, const Instance& instance, const Schema& source);

bool check_constraint(const Constraint& c, const Instance& instance, const Schema& schema);

/// First violated constraint index, or -1.
int first_violation(const Schema& schema, const Instance& instance);

/// NOT NULL flags, arities and sorts of stored tuples.
bool conforms(const Schema& schema, const Instance& instance);

}  // namespace lossless
