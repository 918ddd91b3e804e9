#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "lossless/enumerate.hpp"
#include "lossless/eval.hpp"
#include "lossless/patterns.hpp"

namespace lossless {

enum class Direction { ForwardDominance, Equivalence };
enum class Status { Verified, Counterexample, DomainMissing };

const char* direction_name(Direction d);
const char* status_name(Status s);

struct VerificationConfig {
  DomainSpec domains;
  EnumerationBounds bounds;
  Direction direction = Direction::Equivalence;
  /// Used for the target-side enumeration; default to `domains` / `bounds`.
  std::optional<DomainSpec> target_domains;
  std::optional<EnumerationBounds> target_bounds;
};

struct Counterexample {
  std::string side;       // "source" or "target": the schema the instance is legal for
  Instance instance;      // legal instance of `side`
  Instance image;         // mapped to the other schema
  Instance round_trip;    // mapped back
  std::string violation;  // what failed
};

struct VerificationReport {
  Status status = Status::Verified;
  Direction direction = Direction::Equivalence;
  std::size_t source_instances = 0;
  std::size_t target_instances = 0;
  std::optional<Counterexample> counterexample;
  std::string message;

  std::size_t instances_checked() const { return source_instances + target_instances; }
};

/// For every legal source instance I: fwd(I) is legal for the target and
/// bwd(fwd(I)) = I.
VerificationReport verify_dominance(const CompiledTransform& t, const VerificationConfig& cfg);

/// Dominance, then for every legal target instance J: bwd(J) is legal for the
/// source and fwd(bwd(J)) equals J up to a renaming of OIDs within each tag.
VerificationReport verify_equivalence(const CompiledTransform& t, const VerificationConfig& cfg);

/// Dispatches on cfg.direction.
VerificationReport verify(const CompiledTransform& t, const VerificationConfig& cfg);

/// Replays a counterexample; true when it still fails.
bool counterexample_fails(const CompiledTransform& t, const Counterexample& c);

/// Equal up to a bijection between OIDs of the same tag.
bool equal_up_to_oids(const Instance& a, const Instance& b);

std::string render_text(const VerificationReport& r, const CompiledTransform& t, const VerificationConfig& cfg);
/// One `key=value` per line.
std::string render_kv(const VerificationReport& r, const VerificationConfig& cfg);

}  // namespace lossless
