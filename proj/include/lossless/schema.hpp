#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lossless/algebra.hpp"
#include "lossless/value.hpp"

namespace lossless {

struct AttributeSpec {
  std::string name;
  Sort sort;
  bool nullable = false;
  /// Finite candidate values for the enumeration oracle. Not a constraint.
  std::optional<std::vector<Value>> enum_domain;

  bool operator==(const AttributeSpec&) const = default;
};

struct RelationSignature {
  std::string name;
  std::vector<AttributeSpec> attributes;

  std::optional<std::size_t> index_of(const std::string& attr) const;
  const AttributeSpec* find(const std::string& attr) const;
  std::vector<std::string> attribute_names() const;
  std::size_t arity() const { return attributes.size(); }

  bool operator==(const RelationSignature&) const = default;
};

/// relation.attr list, as used by inclusion dependencies.
struct AttrList {
  std::string relation;
  std::vector<std::string> attrs;
  bool operator==(const AttrList&) const = default;
};

struct FunctionalDep {
  std::string relation;
  std::vector<std::string> lhs;
  std::vector<std::string> rhs;
  bool operator==(const FunctionalDep&) const = default;
};

struct MultivaluedDep {
  std::string relation;
  std::vector<std::string> lhs;
  std::vector<std::string> rhs;
  bool operator==(const MultivaluedDep&) const = default;
};

/// from ⊆ to; with `bidirectional` also to ⊆ from. A bidirectional inclusion
/// between an OID attribute and a VALUE attribute of the same relation is a
/// key correspondence: each side functionally determines the other.
struct Inclusion {
  AttrList from;
  AttrList to;
  bool bidirectional = false;
  bool operator==(const Inclusion&) const = default;
};

struct DomainIn {
  std::string relation;
  std::string attr;
  std::vector<Value> values;
  bool operator==(const DomainIn&) const = default;
};

struct DomainNotIn {
  std::string relation;
  std::string attr;
  std::vector<Value> values;
  bool operator==(const DomainNotIn&) const = default;
};

struct NotNull {
  std::string relation;
  std::string attr;
  bool operator==(const NotNull&) const = default;
};

// Algebraic constraints compare tuple sets positionally.
struct AlgebraicEq {
  Expr lhs;
  Expr rhs;
  bool operator==(const AlgebraicEq&) const = default;
};

struct AlgebraicSubset {
  Expr lhs;
  Expr rhs;
  bool operator==(const AlgebraicSubset&) const = default;
};

struct AlgebraicDisjoint {
  Expr lhs;
  Expr rhs;
  bool operator==(const AlgebraicDisjoint&) const = default;
};

struct AlgebraicEmpty {
  Expr expr;
  bool operator==(const AlgebraicEmpty&) const = default;
};

using Constraint = std::variant<FunctionalDep, MultivaluedDep, Inclusion, DomainIn, DomainNotIn, NotNull,
                                AlgebraicEq, AlgebraicSubset, AlgebraicDisjoint, AlgebraicEmpty>;

/// Relations mentioned by a constraint, first-occurrence order.
std::vector<std::string> constraint_relations(const Constraint& c);

struct Schema {
  std::vector<RelationSignature> relations;
  std::vector<Constraint> constraints;

  const RelationSignature* find(const std::string& name) const;
  const RelationSignature& at(const std::string& name) const;
  bool has(const std::string& name) const { return find(name) != nullptr; }
  std::vector<std::string> relation_names() const;

  bool operator==(const Schema&) const = default;
};

/// True for a bidirectional inclusion inside one relation between attributes of different sorts.
bool is_key_correspondence(const Inclusion& inc, const Schema& schema);

struct View {
  std::string relation;
  Expr expr;
  bool operator==(const View&) const = default;
};

/// One defining expression per target relation, in target declaration order.
struct Mapping {
  std::vector<View> views;

  const Expr* find(const std::string& relation) const;
  const Expr& at(const std::string& relation) const;

  static Mapping identity(const Schema& schema);

  bool operator==(const Mapping&) const = default;
};

struct Diagnostic {
  std::string subject;  // offending relation / constraint
  std::string rule;     // short rule id, e.g. "unknown attribute"
  std::string message;

  std::string str() const { return subject + ": " + rule + (message.empty() ? "" : " (" + message + ")"); }
  bool operator==(const Diagnostic&) const = default;
};

std::vector<Diagnostic> validate_schema(const Schema& schema);
std::vector<Diagnostic> validate_mapping(const Schema& source, const Schema& target, const Mapping& mapping);

}  // namespace lossless
