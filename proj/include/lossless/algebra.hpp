#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lossless/value.hpp"

namespace lossless {

/// Selection predicate. Comparisons involving NULL are false; only
/// IS [NOT] NULL observe NULL.
struct Predicate {
  enum class Kind { True, False, EqAttr, EqConst, NeConst, IsNull, IsNotNull, And };

  Kind kind = Kind::True;
  std::string attr;
  std::string other_attr;
  Value constant;
  std::vector<Predicate> terms;

  static Predicate always() { return {}; }
  static Predicate never() { return {Kind::False, {}, {}, {}, {}}; }
  static Predicate eq_attr(std::string a, std::string b) { return {Kind::EqAttr, std::move(a), std::move(b), {}, {}}; }
  static Predicate eq_const(std::string a, Value v) { return {Kind::EqConst, std::move(a), {}, std::move(v), {}}; }
  static Predicate ne_const(std::string a, Value v) { return {Kind::NeConst, std::move(a), {}, std::move(v), {}}; }
  static Predicate is_null(std::string a) { return {Kind::IsNull, std::move(a), {}, {}, {}}; }
  static Predicate is_not_null(std::string a) { return {Kind::IsNotNull, std::move(a), {}, {}, {}}; }
  static Predicate conjunction(std::vector<Predicate> terms);

  /// Attributes mentioned, in first-occurrence order.
  std::vector<std::string> attributes() const;

  /// Negation for atomic predicates; nullopt when the negation leaves the grammar.
  std::optional<Predicate> negated() const;

  bool operator==(const Predicate&) const = default;
};

struct RenameItem {
  std::string from;
  std::string to;
  std::optional<Sort> cast;  // retag into this sort
  bool operator==(const RenameItem&) const = default;
};

struct PadItem {
  std::string name;
  Sort sort;
  bool operator==(const PadItem&) const = default;
};

/// Immutable relational-algebra expression with value semantics (shared nodes).
class Expr {
 public:
  enum class Kind {
    RelationRef, Project, Select, Rename, Product, NaturalJoin, OuterJoin,
    Union, Intersect, Difference, Pad
  };

  static Expr relation(std::string name);
  static Expr project(std::vector<std::string> attrs, Expr input);
  static Expr select(Predicate pred, Expr input);
  static Expr rename(std::vector<RenameItem> items, Expr input);
  static Expr product(Expr lhs, Expr rhs);
  static Expr join(Expr lhs, Expr rhs);
  /// n-ary full outer natural join, folded left-to-right in list order.
  static Expr outer_join(std::vector<Expr> inputs);
  static Expr set_union(Expr lhs, Expr rhs);
  static Expr intersect(Expr lhs, Expr rhs);
  static Expr difference(Expr lhs, Expr rhs);
  /// Appends NULL-valued columns.
  static Expr pad(std::vector<PadItem> items, Expr input);

  Kind kind() const { return kind_; }

  // Accessors; valid only for the matching kind.
  const std::string& relation_name() const { return name_; }
  const std::vector<std::string>& attrs() const { return attrs_; }
  const Predicate& predicate() const { return pred_; }
  const std::vector<RenameItem>& renames() const { return renames_; }
  const std::vector<PadItem>& pads() const { return pads_; }
  const std::vector<Expr>& children() const { return *children_; }
  const Expr& child(std::size_t i = 0) const { return (*children_)[i]; }

  /// Relation names referenced, deduplicated, in first-occurrence order.
  std::vector<std::string> relations() const;

  bool operator==(const Expr& other) const;

  /// Rebuilds this node with new children (same operator and parameters).
  Expr with_children(std::vector<Expr> children) const;

 private:
  Expr() = default;
  static Expr make(Kind kind, std::vector<Expr> children);

  Kind kind_ = Kind::RelationRef;
  std::string name_;
  std::vector<std::string> attrs_;
  Predicate pred_;
  std::vector<RenameItem> renames_;
  std::vector<PadItem> pads_;
  std::shared_ptr<const std::vector<Expr>> children_ = std::make_shared<const std::vector<Expr>>();
};

}  // namespace lossless
