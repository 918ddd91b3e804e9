#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace lossless {

/// A constant token: integer or string literal. No arithmetic is defined on it.
using Token = std::variant<std::int64_t, std::string>;

std::string token_to_string(const Token& token);

struct NullMarker {
  auto operator<=>(const NullMarker&) const = default;
};

struct Constant {
  Token token;
  auto operator<=>(const Constant&) const = default;
};

/// Object identifier. The payload is the natural-key token it was minted from.
struct ObjectId {
  std::string tag;
  Token payload;
  auto operator<=>(const ObjectId&) const = default;
};

/// Attribute sort. OID(tag) is disjoint from VALUE and from OIDs of other tags.
struct Sort {
  enum class Kind { Value, Oid };
  Kind kind = Kind::Value;
  std::string tag;

  static Sort value() { return {}; }
  static Sort oid(std::string tag) { return {Kind::Oid, std::move(tag)}; }
  bool is_oid() const { return kind == Kind::Oid; }
  std::string str() const;
  auto operator<=>(const Sort&) const = default;
};

class Value {
 public:
  Value() = default;
  static Value null() { return Value(NullMarker{}); }
  static Value integer(std::int64_t v) { return Value(Constant{v}); }
  static Value string(std::string v) { return Value(Constant{std::move(v)}); }
  static Value constant(Token t) { return Value(Constant{std::move(t)}); }
  static Value oid(std::string tag, Token payload) {
    return Value(ObjectId{std::move(tag), std::move(payload)});
  }

  bool is_null() const { return std::holds_alternative<NullMarker>(rep_); }
  bool is_const() const { return std::holds_alternative<Constant>(rep_); }
  bool is_oid() const { return std::holds_alternative<ObjectId>(rep_); }

  const Constant& as_const() const { return std::get<Constant>(rep_); }
  const ObjectId& as_oid() const { return std::get<ObjectId>(rep_); }

  /// Moves the value into `target`: constants are retagged as OIDs and OIDs
  /// are untagged back into constants. NULL stays NULL.
  Value cast_to(const Sort& target) const;

  /// True when the value may inhabit an attribute of sort `s` (NULL fits all).
  bool fits(const Sort& s) const;

  /// Literal rendering used by every text format: 3, "abc", NULL, P:s1.
  std::string str() const;

  /// Equality under selection semantics: NULL never equals anything.
  bool sql_equals(const Value& other) const { return !is_null() && !other.is_null() && rep_ == other.rep_; }

  auto operator<=>(const Value&) const = default;

 private:
  explicit Value(std::variant<NullMarker, Constant, ObjectId> rep) : rep_(std::move(rep)) {}
  std::variant<NullMarker, Constant, ObjectId> rep_;
};

using Tuple = std::vector<Value>;

std::string tuple_to_string(const Tuple& t);

}  // namespace lossless
