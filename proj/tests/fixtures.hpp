#pragma once

#include <string>

#include "lossless/parse.hpp"
#include "lossless/patterns.hpp"

namespace testing_fixtures {

inline std::string path(const std::string& rel) { return std::string(LOSSLESS_FIXTURES) + "/" + rel; }

inline std::string text(const std::string& rel) { return lossless::read_file(path(rel)); }

inline lossless::Schema schema(const std::string& rel) { return lossless::parse_schema(text(rel)); }

inline lossless::CompiledTransform transform(const std::string& schema_rel, const std::string& plan_rel) {
  return lossless::compose_plan(schema(schema_rel), lossless::parse_plan(text(plan_rel)));
}

}  // namespace testing_fixtures
