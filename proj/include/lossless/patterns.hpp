#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "lossless/algebra.hpp"
#include "lossless/schema.hpp"

namespace lossless {

struct VerticalDecomposition {
  std::string relation;
  std::string left_name;
  std::vector<std::string> left;
  std::string right_name;
  std::vector<std::string> right;
  std::vector<std::string> shared;
};

struct HorizontalDecomposition {
  std::string relation;
  Predicate condition;
  std::string first_name;   // rows satisfying the condition
  std::string second_name;  // rows satisfying its negation
};

/// Splits off the rows where `attrs` are NULL. Several attributes may be
/// eliminated together when the schema declares them co-null. Without a
/// `without_name` the NULL rows are recovered from the table the remaining
/// key is in bidirectional inclusion with.
struct NullElimination {
  std::string relation;
  std::vector<std::string> attrs;
  std::optional<std::string> without_name;
  std::string with_name;
};

/// An entity type keyed by `key`. In place (no `source`): `name` is an
/// existing table that gains the OID attribute. Anchored: `name` is a new
/// unary table minted from `source`, with an identification table `ident`.
struct OidEntity {
  std::string name;
  std::vector<std::string> key;
  std::string tag;
  std::string oid_attr;
  std::optional<std::string> source;
  std::string ident;
};

/// A new unary table of the supertype's OIDs, minted from `source`.
struct OidSubtype {
  std::string name;
  std::string supertype;
  std::string source;
};

struct ForeignKey {
  std::string attr;
  std::string entity;
};

struct OidRelationship {
  std::string relation;
  std::vector<ForeignKey> fks;
};

struct OidIntroduction {
  std::vector<OidEntity> entities;
  std::vector<OidSubtype> subtypes;
  std::vector<OidRelationship> relationships;
};

struct RenameAttr {
  std::string relation;
  std::string from;
  std::string to;
};

using TransformStep = std::variant<VerticalDecomposition, HorizontalDecomposition, NullElimination, OidIntroduction,
                                   RenameAttr>;

struct CompiledTransform {
  Schema source;
  Schema target;
  Mapping fwd;  // target relations over source
  Mapping bwd;  // source relations over target
  std::vector<TransformStep> provenance;
};

CompiledTransform identity_transform(const Schema& schema);

CompiledTransform apply_vertical(const Schema& schema, const VerticalDecomposition& step);
CompiledTransform apply_horizontal(const Schema& schema, const HorizontalDecomposition& step);
CompiledTransform apply_null_elimination(const Schema& schema, const NullElimination& step);
CompiledTransform apply_oid_introduction(const Schema& schema, const OidIntroduction& step);
CompiledTransform apply_rename(const Schema& schema, const RenameAttr& step);
CompiledTransform apply_step(const Schema& schema, const TransformStep& step);

/// Runs the steps in order and composes the mappings by view unfolding. The
/// composed views are normalized. Errors keep their code and gain the
/// 1-based step index.
CompiledTransform compose_plan(const Schema& source, const std::vector<TransformStep>& steps);

struct Classification {
  std::vector<std::string> entities;
  std::vector<std::string> relationships;
  std::vector<std::string> undecided;
};

/// Rule of thumb over one-directional inclusions between tables: sources are
/// relationship candidates, targets of a relationship candidate are entity
/// candidates. Tables in both or neither set are undecided.
Classification classify_tables(const Schema& schema);

/// One step per statement; consecutive `oid` statements form one step.
///   vertical p -> q(a, b) r(b, c) on (b)
///   horizontal r -> r1 r2 where c = "k"
///   null_elim Source.depname -> NoDept Dept        null_elim PD.depname, address -> - Emp
///   oid entity Employee key(ssn) tag E [as eoid]
///   oid entity Person key(ssn) tag P anchor from has-name ident Person-ssn
///   oid subtype Employee of Person from Emp
///   oid relationship works-in fk(ssn -> Employee) fk(depname -> Department)
///   rename r.old -> new
std::vector<TransformStep> parse_plan(std::string_view text);

std::string to_string(const TransformStep& step);
std::string print_transform(const CompiledTransform& t);

}  // namespace lossless
