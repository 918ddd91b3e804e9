#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "lossless/error.hpp"
#include "lossless/print.hpp"

using namespace lossless;
namespace fx = testing_fixtures;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return Errc::StepFailed;
}

CompiledTransform run(const char* schema, const char* plan) { return compose_plan(parse_schema(schema), parse_plan(plan)); }

}  // namespace

TEST(Vertical, MatchesGoldens) {
  auto t = fx::transform("vertical/source.schema", "vertical/plan.txt");
  EXPECT_EQ(print_schema(t.target), print_schema(fx::schema("vertical/target.schema")));
  EXPECT_EQ(print_mapping(t.fwd), print_mapping(parse_mapping(fx::text("vertical/fwd.map"))));
  EXPECT_EQ(print_mapping(t.bwd), print_mapping(parse_mapping(fx::text("vertical/bwd.map"))));
}

TEST(Vertical, Errors) {
  const char* s = "relation p(a, b, c)\nfd p: b -> c";
  EXPECT_EQ(code_of([&] { run(s, "vertical p -> q(a, b) r(c) on (b)"); }), Errc::AttributePartitionInvalid);
  EXPECT_EQ(code_of([&] { run(s, "vertical p -> q(a, b) r(b, c) on (a)"); }), Errc::AttributePartitionInvalid);
  EXPECT_EQ(code_of([&] { run(s, "vertical p -> q(a, c) r(b, c) on (c)"); }), Errc::NoJustifyingDependency);
  EXPECT_EQ(code_of([&] { run("relation p(a, b, c)", "vertical p -> q(a, b) r(b, c) on (b)"); }),
            Errc::NoJustifyingDependency);
  EXPECT_EQ(code_of([&] { run(s, "vertical p -> q(a, b) q(b, c) on (b)"); }), Errc::NameClash);
}

TEST(Vertical, MvdJustifies) {
  auto t = run("relation p(a, b, c)\nmvd p: b ->> c", "vertical p -> q(a, b) r(b, c) on (b)");
  EXPECT_EQ(t.target.relations.size(), 2u);
  EXPECT_EQ(to_string(t.bwd.at("p")), "join(q, r)");
}

TEST(Vertical, FdAcrossSidesNeedsDerivedImage) {
  // ssn -> name spans both sides; the OID correspondence restores it as eoid -> name.
  auto t = fx::transform("employee/source.schema", "employee/carm_plan.txt");
  const auto& cs = t.target.constraints;
  EXPECT_NE(std::find(cs.begin(), cs.end(), Constraint{FunctionalDep{"has-name", {"eoid"}, {"name"}}}), cs.end());
}

TEST(Horizontal, MatchesGolden) {
  auto t = fx::transform("horizontal/source.schema", "horizontal/plan.txt");
  EXPECT_EQ(print_schema(t.target), print_schema(fx::schema("horizontal/target.schema")));
  EXPECT_EQ(to_string(t.fwd.at("r1")), "sigma[c = \"k\"](r)");
  EXPECT_EQ(to_string(t.fwd.at("r2")), "sigma[c != \"k\"](r)");
  EXPECT_EQ(to_string(t.bwd.at("r")), "union(r1, r2)");
}

TEST(Horizontal, Errors) {
  const char* s = "relation r(a, b, c NULLABLE)\nfd r: b -> c";
  EXPECT_EQ(code_of([&] { run(s, "horizontal r -> r1 r2 where a = 1 and b = 2"); }), Errc::UnsupportedCondition);
  EXPECT_EQ(code_of([&] { run(s, "horizontal r -> r1 r2 where c = 1"); }), Errc::UnsupportedCondition);
  // The fd relates rows that the condition on a sends to different branches.
  EXPECT_EQ(code_of([&] { run(s, "horizontal r -> r1 r2 where a = 1"); }), Errc::UnsupportedCondition);
}

TEST(NullElimination, StandardForm) {
  auto t = run("relation R(k, d NULLABLE)\nkey R(k)", "null_elim R.d -> R0 R1");
  ASSERT_EQ(t.target.relations.size(), 2u);
  EXPECT_EQ(to_string(t.target.relations[0]), "relation R0(k)");
  EXPECT_EQ(to_string(t.target.relations[1]), "relation R1(k, d)");
  EXPECT_EQ(to_string(t.fwd.at("R1")), "sigma[d is not null](R)");
  EXPECT_EQ(code_of([&] { run("relation R(k, d)", "null_elim R.d -> R0 R1"); }), Errc::AttributeNotNullable);
}

TEST(OidIntroduction, EmployeeGolden) {
  auto t = fx::transform("employee/source.schema", "employee/plan.txt");
  EXPECT_EQ(print_schema(t.target), print_schema(fx::schema("employee/target.schema")));
  EXPECT_EQ(t.target.constraints.size(), 6u);
}

TEST(OidIntroduction, Errors) {
  const char* s = "relation E(ssn, name)\nrelation W(ssn, d)\ninclusion W.ssn <= E.ssn";
  EXPECT_EQ(code_of([&] { run(s, "oid entity E key(ssn) tag E"); }), Errc::MissingKey);
  const char* keyed = "relation E(ssn, name)\nrelation W(ssn, d)\nkey E(ssn)\ninclusion W.ssn <= E.ssn";
  EXPECT_EQ(code_of([&] { run(keyed, "oid entity E key(ssn) tag E\noid relationship W fk(ssn -> X)"); }),
            Errc::DanglingForeignKey);
  EXPECT_EQ(code_of([&] { run(keyed, "oid entity E key(ssn) tag E as name"); }), Errc::NameClash);
}

TEST(WorkedExample, NineRelationsAndViews) {
  auto t = fx::transform("worked/source.schema", "worked/plan.txt");
  auto names = t.target.relation_names();
  std::sort(names.begin(), names.end());
  std::vector<std::string> expected{"Department", "Department-name", "Employee",  "Person",     "Person-ssn",
                                    "has-address", "has-name",        "has-phone", "works-in"};
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(names, expected);
  auto golden = parse_mapping(fx::text("worked/fwd.golden.map"));
  ASSERT_EQ(golden.views.size(), 9u);
  for (const auto& v : golden.views) EXPECT_EQ(to_string(t.fwd.at(v.relation)), to_string(v.expr)) << v.relation;
}

TEST(Compose, StepErrorsCarryIndex) {
  try {
    run("relation p(a, b, c)\nfd p: b -> c", "vertical p -> q(a, b) r(b, c) on (b)\nvertical q -> x(a) y(b) on ()");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoJustifyingDependency);
    EXPECT_NE(std::string(e.what()).find("step 2"), std::string::npos) << e.what();
  }
}

TEST(Compose, EmptyPlanIsIdentity) {
  auto s = fx::schema("worked/source.schema");
  auto t = compose_plan(s, {});
  EXPECT_EQ(t.target, s);
  EXPECT_EQ(to_string(t.fwd.at("Source")), "Source");
  EXPECT_EQ(to_string(t.bwd.at("Source")), "Source");
}

TEST(Compose, RenameStep) {
  auto t = run("relation p(a, b)", "rename p.a -> z");
  EXPECT_EQ(to_string(t.target.relations[0]), "relation p(z, b)");
  EXPECT_EQ(to_string(t.bwd.at("p")), "rho[z->a](p)");
}

TEST(Plan, PrintParseRoundTrip) {
  auto plan = parse_plan(fx::text("worked/plan.txt"));
  std::string printed;
  for (const auto& st : plan) printed += to_string(st) + "\n";
  auto again = parse_plan(printed);
  ASSERT_EQ(again.size(), plan.size());
  for (std::size_t i = 0; i < plan.size(); ++i) EXPECT_EQ(to_string(again[i]), to_string(plan[i]));
}

TEST(Classify, RuleOfThumb) {
  auto c = classify_tables(fx::schema("employee/source.schema"));
  EXPECT_EQ(c.entities, (std::vector<std::string>{"Employee", "Department"}));
  EXPECT_EQ(c.relationships, (std::vector<std::string>{"works-in"}));
  EXPECT_TRUE(c.undecided.empty());
}
