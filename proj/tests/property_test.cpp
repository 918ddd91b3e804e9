#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "lossless/enumerate.hpp"
#include "lossless/eval.hpp"
#include "lossless/rewrite.hpp"

using namespace lossless;
namespace fx = testing_fixtures;

namespace {

// fwd and bwd of the composed plan against running the steps one at a time.
void expect_stepwise(const Schema& source, const std::string& plan_rel, const DomainSpec& dom,
                     const EnumerationBounds& bounds) {
  auto steps = parse_plan(fx::text(plan_rel));
  auto composed = compose_plan(source, steps);
  std::vector<CompiledTransform> stages;
  Schema cur = source;
  for (const auto& s : steps) {
    stages.push_back(apply_step(cur, s));
    cur = stages.back().target;
  }
  std::size_t n = 0;
  for_each_legal_instance(source, dom, bounds, [&](const Instance& i) {
    Instance x = i;
    for (const auto& st : stages) x = apply_mapping(st.fwd, x, st.source);
    EXPECT_EQ(apply_mapping(composed.fwd, i, source), x);
    ++n;
    return true;
  });
  for_each_legal_instance(composed.target, dom, bounds, [&](const Instance& j) {
    Instance x = j;
    for (auto it = stages.rbegin(); it != stages.rend(); ++it) x = apply_mapping(it->bwd, x, it->target);
    EXPECT_EQ(apply_mapping(composed.bwd, j, composed.target), x);
    ++n;
    return true;
  });
  EXPECT_GT(n, 2u);
}

std::vector<Expr> queries(const std::string& rel) {
  std::vector<Expr> out;
  std::istringstream in(fx::text(rel));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(parse_expr(line));
  }
  return out;
}

}  // namespace

TEST(Property, HorizontalChainComposesStepwise) {
  expect_stepwise(fx::schema("horizontal/s_source.schema"), "horizontal/s_plan.txt", DomainSpec::integers(2), {});
}

TEST(Property, WorkedPlanComposesStepwise) {
  auto dom = DomainSpec::integers(2);
  expect_stepwise(fx::schema("worked/source.schema"), "worked/plan.txt", dom, {1});
}

TEST(Property, UnfoldingCommutesWithEvaluation) {
  auto t = fx::transform("vertical/source.schema", "vertical/plan.txt");
  auto qs = queries("vertical/queries_target.txt");
  for (const auto& i : legal_instances(t.source, DomainSpec::integers(2), {})) {
    auto image = apply_mapping(t.fwd, i, t.source);
    for (const auto& q : qs) {
      EXPECT_EQ(evaluate(unfold_query(q, t.fwd), i, t.source).rows, evaluate(q, image, t.target).rows);
    }
  }
}

TEST(Property, NormalizePreservesMeaning) {
  auto t = fx::transform("vertical/source.schema", "vertical/plan.txt");
  auto qs = queries("vertical/queries_source.txt");
  for (const auto& i : legal_instances(t.source, DomainSpec::integers(2), {})) {
    for (const auto& q : qs) {
      auto a = evaluate(q, i, t.source);
      auto b = evaluate(normalize(q, t.source), i, t.source);
      EXPECT_EQ(column_names(a.header), column_names(b.header));
      EXPECT_EQ(a.rows, b.rows);
    }
  }
}

TEST(Property, LegalCountsGrowWithBounds) {
  auto s = fx::schema("vertical/target.schema");
  std::size_t prev = 0;
  for (std::size_t k = 0; k <= 3; ++k) {
    auto n = for_each_legal_instance(s, DomainSpec::integers(2), {k}, [](const Instance&) { return true; });
    EXPECT_GE(n, prev);
    prev = n;
  }
  auto small = for_each_legal_instance(s, DomainSpec::integers(1), {}, [](const Instance&) { return true; });
  auto large = for_each_legal_instance(s, DomainSpec::integers(2), {}, [](const Instance&) { return true; });
  EXPECT_LE(small, large);
}
