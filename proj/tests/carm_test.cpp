#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "lossless/carm.hpp"
#include "lossless/error.hpp"

using namespace lossless;
namespace fx = testing_fixtures;

namespace {

bool has_rule(const std::vector<Diagnostic>& ds, const std::string& rule) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.rule == rule; });
}

}  // namespace

TEST(CarmForm, TwoValueAttributes) {
  auto s = parse_schema("relation Employee(eoid OID(E), ssn, name)\ninclusion2 Employee.eoid <=> Employee.ssn");
  EXPECT_TRUE(has_rule(check_carm_form(s), "two VALUE attributes"));
}

TEST(CarmForm, AttributeFactWithKey) {
  auto s = parse_schema("relation has-phone(poid OID(P), phone)\nkey has-phone(poid, phone)");
  EXPECT_TRUE(check_carm_form(s).empty());
  EXPECT_EQ(classify_carm(s).class_of("has-phone"), CarmClass::AttributeFact);
}

TEST(CarmForm, NonKeyFunctionalDependency) {
  auto s = parse_schema("relation R(o OID(X), p OID(X), a)\nfd R: a -> p");
  EXPECT_TRUE(has_rule(check_carm_form(s), "non-key functional dependency"));
}

TEST(CarmForm, ValueInclusionIsRejected) {
  auto s = parse_schema("relation A(o OID(X), a)\nrelation B(o OID(X), a)\ninclusion A.a <= B.a");
  EXPECT_TRUE(has_rule(check_carm_form(s), "inclusion over VALUE attributes"));
}

TEST(Carm, WorkedExample) {
  auto [carm, t] = derive_carm(fx::schema("worked/source.schema"), parse_plan(fx::text("worked/plan.txt")));
  EXPECT_TRUE(check_carm_form(carm.schema).empty());
  EXPECT_EQ(carm.anchors, (std::vector<std::string>{"Person", "Department", "Employee"}));
  EXPECT_EQ(carm.identifications, (std::vector<std::string>{"Person-ssn", "Department-name"}));
  EXPECT_EQ(carm.attribute_facts, (std::vector<std::string>{"has-phone", "has-name", "has-address"}));
  EXPECT_EQ(carm.relationship_facts, (std::vector<std::string>{"works-in"}));
  // Every relation lands in exactly one class.
  EXPECT_EQ(carm.anchors.size() + carm.identifications.size() + carm.attribute_facts.size() +
                carm.relationship_facts.size(),
            carm.schema.relations.size());
}

TEST(Carm, IdentityOnNonCanonicalSource) {
  try {
    derive_carm(fx::schema("worked/source.schema"), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotInCarmForm);
  }
}

TEST(Carm, EmployeeAfterSplits) {
  auto [carm, t] = derive_carm(fx::schema("employee/source.schema"), parse_plan(fx::text("employee/carm_plan.txt")));
  EXPECT_EQ(carm.identifications, (std::vector<std::string>{"Employee-ssn", "Department-name"}));
  EXPECT_EQ(carm.relationship_facts, (std::vector<std::string>{"works-in"}));
}

TEST(Carm, Source2) {
  auto [carm, t] = derive_carm(fx::schema("source2/source.schema"), parse_plan(fx::text("source2/plan.txt")));
  EXPECT_EQ(carm.schema.relations.size(), 9u);
}

TEST(Dot, WorkedExampleGraph) {
  auto [carm, t] = derive_carm(fx::schema("worked/source.schema"), parse_plan(fx::text("worked/plan.txt")));
  const auto dot = export_conceptual_dot(carm);
  for (const char* node : {"\"Person\" [shape=box]", "\"Employee\" [shape=box]", "\"Department\" [shape=box]"}) {
    EXPECT_NE(dot.find(node), std::string::npos) << node;
  }
  for (const char* edge : {"label=\"has-name\"", "label=\"has-phone\"", "label=\"has-address\"",
                           "\"Employee\" -> \"Department\" [label=\"works-in\"]"}) {
    EXPECT_NE(dot.find(edge), std::string::npos) << edge;
  }
  EXPECT_EQ(dot, export_conceptual_dot(carm));
}

TEST(Dot, SingleAnchor) {
  auto carm = classify_carm(parse_schema("relation Thing(o OID(T))"));
  EXPECT_EQ(export_conceptual_dot(carm), "digraph carm {\n  rankdir=LR;\n  \"Thing\" [shape=box];\n}\n");
}
