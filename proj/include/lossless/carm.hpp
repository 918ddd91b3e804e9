#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lossless/patterns.hpp"
#include "lossless/schema.hpp"
#include "lossless/verify.hpp"

namespace lossless {

enum class CarmClass { Anchor, Identification, AttributeFact, RelationshipFact };

const char* carm_class_name(CarmClass c);

struct CarmSchema {
  Schema schema;
  std::vector<std::string> anchors;
  std::vector<std::string> identifications;
  std::vector<std::string> attribute_facts;
  std::vector<std::string> relationship_facts;

  CarmClass class_of(const std::string& relation) const;
};

/// Empty iff `schema` is in CARM form.
std::vector<Diagnostic> check_carm_form(const Schema& schema);

/// Partitions a schema that passes check_carm_form; NotInCarmForm otherwise.
CarmSchema classify_carm(const Schema& schema);

struct CarmOptions {
  /// Equivalence check run before the result is accepted; skipped when empty.
  std::optional<VerificationConfig> gate = standard_gate();

  static VerificationConfig standard_gate();
};

std::pair<CarmSchema, CompiledTransform> derive_carm(const Schema& source, const std::vector<TransformStep>& plan,
                                                     const CarmOptions& options = {});

/// Graphviz DOT text for the conceptual schema.
std::string export_conceptual_dot(const CarmSchema& carm);

}  // namespace lossless
