#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lossless/eval.hpp"
#include "lossless/schema.hpp"

namespace lossless {

/// Finite candidate values per attribute. Lookup order: "rel.attr" override,
/// "attr" override, the attribute's enum_domain, then the per-sort default.
struct DomainSpec {
  /// Default VALUE domain; empty means "none supplied".
  std::vector<Value> values;
  std::map<std::string, std::vector<Value>> attributes;
  /// OID domains per tag. Missing tags get tag:0..k-1 with k the largest
  /// VALUE domain size in the schema.
  std::map<std::string, std::vector<Value>> oids;

  /// VALUE default of integers 0..k-1.
  static DomainSpec integers(int k);

  /// Throws DomainMissing.
  std::vector<Value> domain_for(const Schema& schema, const RelationSignature& rel, const AttributeSpec& attr) const;
};

struct EnumerationBounds {
  /// nullopt: every subset of the candidate tuples.
  std::optional<std::size_t> max_tuples_per_relation;
};

/// Candidate tuples of one relation (domain product, NULL added for NULLABLE
/// attributes), lexicographically sorted.
std::vector<Tuple> candidate_tuples(const Schema& schema, const RelationSignature& rel, const DomainSpec& domains);

/// Visits every legal instance within the bound. Order: increasing total
/// tuple count, then relations in declaration order with smaller relations
/// first, tuples combined lexicographically. Returning false from `visit`
/// stops the enumeration. Returns the number of instances visited.
std::size_t for_each_legal_instance(const Schema& schema, const DomainSpec& domains, const EnumerationBounds& bounds,
                                    const std::function<bool(const Instance&)>& visit);

std::vector<Instance> legal_instances(const Schema& schema, const DomainSpec& domains, const EnumerationBounds& bounds);

}  // namespace lossless
