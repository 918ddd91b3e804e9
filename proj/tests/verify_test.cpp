#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lossless/error.hpp"
#include "lossless/print.hpp"
#include "lossless/verify.hpp"
#include "oracle.hpp"

using namespace lossless;
namespace fx = testing_fixtures;

namespace {

VerificationConfig bounds(int k, std::optional<std::size_t> tuples = std::nullopt) {
  VerificationConfig cfg;
  cfg.domains = DomainSpec::integers(k);
  cfg.bounds.max_tuples_per_relation = tuples;
  return cfg;
}

// Legal (q, r) pairs: fd b -> c on r and equal b-projections.
std::size_t oracle_vertical_target_count() {
  auto qs = oracle::subsets(oracle::cube(2, 2));
  auto rs = oracle::subsets(oracle::cube(2, 2));
  std::size_t n = 0;
  for (const auto& q : qs) {
    for (const auto& r : rs) {
      if (oracle::fd_holds(r, {0}, {1}) && oracle::project(q, {1}) == oracle::project(r, {0})) ++n;
    }
  }
  return n;
}

}  // namespace

TEST(Verify, VerticalBothDirections) {
  auto t = fx::transform("vertical/source.schema", "vertical/plan.txt");
  auto r = verify_equivalence(t, bounds(2));
  EXPECT_EQ(r.status, Status::Verified);
  EXPECT_EQ(r.source_instances, 49u);
  EXPECT_EQ(r.target_instances, oracle_vertical_target_count());
  EXPECT_EQ(r.instances_checked(), r.source_instances + r.target_instances);
}

TEST(Verify, DominanceSkipsTarget) {
  auto t = fx::transform("vertical/source.schema", "vertical/plan.txt");
  auto cfg = bounds(2);
  cfg.direction = Direction::ForwardDominance;
  auto r = verify(t, cfg);
  EXPECT_EQ(r.status, Status::Verified);
  EXPECT_EQ(r.target_instances, 0u);
}

TEST(Verify, ZeroTuplesChecksOnlyEmptyInstances) {
  auto t = fx::transform("vertical/source.schema", "vertical/plan.txt");
  auto r = verify_equivalence(t, bounds(2, 0));
  EXPECT_EQ(r.status, Status::Verified);
  EXPECT_EQ(r.source_instances, 1u);
  EXPECT_EQ(r.target_instances, 1u);
}

TEST(Verify, MissingDomainIsReported) {
  auto t = fx::transform("vertical/source.schema", "vertical/plan.txt");
  VerificationConfig cfg;
  auto r = verify_equivalence(t, cfg);
  EXPECT_EQ(r.status, Status::DomainMissing);
  EXPECT_FALSE(r.message.empty());
}

TEST(Verify, DroppedCoverageGivesReplayableCounterexample) {
  auto t = fx::transform("vertical/source.schema", "vertical/plan.txt");
  t.target.constraints.pop_back();  // inclusion2 q.b <=> r.b
  auto r = verify_equivalence(t, bounds(2));
  ASSERT_EQ(r.status, Status::Counterexample);
  ASSERT_TRUE(r.counterexample);
  EXPECT_EQ(r.counterexample->side, "target");
  EXPECT_EQ(first_violation(t.target, r.counterexample->instance), -1);
  EXPECT_TRUE(counterexample_fails(t, *r.counterexample));
  EXPECT_NE(render_text(r, t, bounds(2)).find("COUNTEREXAMPLE"), std::string::npos);
  EXPECT_NE(render_kv(r, bounds(2)).find("status=COUNTEREXAMPLE"), std::string::npos);
}

TEST(Verify, BrokenForwardViewFailsDominance) {
  auto t = fx::transform("vertical/source.schema", "vertical/plan.txt");
  t.fwd.views[1].expr = parse_expr("pi[b, c](sigma[a = 0](p))");
  auto r = verify_dominance(t, bounds(2));
  ASSERT_EQ(r.status, Status::Counterexample);
  EXPECT_EQ(r.counterexample->side, "source");
  EXPECT_TRUE(counterexample_fails(t, *r.counterexample));
}

TEST(Verify, OidRenamingIsIgnored) {
  auto s = parse_schema("relation A(o OID(P), x)\nrelation B(o OID(P))");
  auto a = parse_instance("A(P:1, 5)\nA(P:2, 6)\nB(P:1)", s);
  auto b = parse_instance("A(P:7, 5)\nA(P:3, 6)\nB(P:7)", s);
  auto c = parse_instance("A(P:7, 5)\nA(P:3, 6)\nB(P:3)", s);
  EXPECT_TRUE(equal_up_to_oids(a, b));
  EXPECT_FALSE(equal_up_to_oids(a, c));
}

TEST(Verify, EmployeeOidIntroduction) {
  auto t = fx::transform("employee/source.schema", "employee/plan.txt");
  EXPECT_EQ(verify_equivalence(t, bounds(2, 2)).status, Status::Verified);
}

TEST(Verify, WorkedExampleSmall) {
  auto t = fx::transform("worked/source.schema", "worked/plan.txt");
  auto r = verify_equivalence(t, bounds(2, 1));
  EXPECT_EQ(r.status, Status::Verified);
  EXPECT_GT(r.target_instances, 0u);
}
