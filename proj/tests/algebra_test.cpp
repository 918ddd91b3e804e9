#include <gtest/gtest.h>

#include "lossless/enumerate.hpp"
#include "lossless/error.hpp"
#include "lossless/eval.hpp"
#include "lossless/parse.hpp"
#include "lossless/print.hpp"
#include "oracle.hpp"

using namespace lossless;

namespace {

const char* kVerticalS = R"(
relation p(a, b, c)
fd p: b -> c
)";

std::size_t oracle_fd_count(std::size_t max_size) {
  return oracle::count_if_subsets(oracle::cube(2, 3), max_size,
                                  [](const oracle::Relation& r) { return oracle::fd_holds(r, {1}, {2}); });
}

Instance inst(const char* text, const Schema& s) { return parse_instance(text, s); }

}  // namespace

TEST(Enumerate, FdInstancesMatchOracle) {
  auto s = parse_schema(kVerticalS);
  auto all = legal_instances(s, DomainSpec::integers(2), {});
  EXPECT_EQ(all.size(), oracle_fd_count(SIZE_MAX));
  EXPECT_EQ(all.size(), 49u);
  auto singles = legal_instances(s, DomainSpec::integers(2), {1});
  EXPECT_EQ(singles.size(), oracle_fd_count(1));
  EXPECT_EQ(singles.size(), 9u);
  EXPECT_EQ(all.front().total_tuples(), 0u);
}

TEST(Enumerate, OrderIsByTotalSize) {
  auto s = parse_schema(kVerticalS);
  auto all = legal_instances(s, DomainSpec::integers(2), {});
  for (std::size_t i = 1; i < all.size(); ++i) EXPECT_LE(all[i - 1].total_tuples(), all[i].total_tuples());
}

TEST(Enumerate, SelfConsistentWithChecker) {
  auto s = parse_schema(kVerticalS);
  for (const auto& i : legal_instances(s, DomainSpec::integers(2), {})) EXPECT_EQ(first_violation(s, i), -1);
}

TEST(Enumerate, MissingDomain) {
  auto s = parse_schema(kVerticalS);
  EXPECT_THROW(legal_instances(s, DomainSpec{}, {}), Error);
}

TEST(Enumerate, NullableAddsNullCandidate) {
  auto s = parse_schema("relation p(a, b NULLABLE)");
  EXPECT_EQ(candidate_tuples(s, s.relations[0], DomainSpec::integers(2)).size(), 6u);
}

TEST(Evaluate, JoinAndProjection) {
  auto s = parse_schema("relation q(a, b)\nrelation r(b, c)\nrelation p(a, b, c)");
  auto i = inst(R"(q("a1", "b1")
r("b1", "c1")
p("a1", "b1", "c1")
p("a1", "b1", "c2"))",
                s);
  EXPECT_EQ(evaluate(parse_expr("join(q, r)"), i, s).rows, i.at("p").size() ? Rows{*i.at("p").begin()} : Rows{});
  EXPECT_EQ(evaluate(parse_expr("pi[a, b](p)"), i, s).rows.size(), 1u);
}

TEST(Evaluate, SelectNotNull) {
  auto s = parse_schema("relation Source(ssn, phone, name, depname VALUE NULLABLE, address VALUE NULLABLE)");
  auto i = inst(R"(Source("s1", "p1", "n1", NULL, NULL)
Source("s2", "p2", "n2", "d1", "a1"))",
                s);
  auto rows = evaluate(parse_expr("sigma[depname NOT NULL](Source)"), i, s).rows;
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows.begin()->at(0), Value::string("s2"));
}

TEST(Constraints, Basics) {
  auto s = parse_schema(R"(
relation p(a, b, c)
relation r1(b, c)
relation r2(b, c)
fd p: b -> c
assert_disjoint pi[b](r1), pi[b](r2)
domain_in r1.c in {"k"}
)");
  auto bad = inst("p(1, 1, 1)\np(2, 1, 2)", s);
  EXPECT_FALSE(check_constraint(s.constraints[0], bad, s));
  auto i = inst(R"(r1("b1", "k")
r2("b2", "j"))", s);
  EXPECT_TRUE(check_constraint(s.constraints[1], i, s));
  EXPECT_TRUE(check_constraint(s.constraints[2], i, s));
  auto j = inst(R"(r1("b1", "j"))", s);
  EXPECT_FALSE(check_constraint(s.constraints[2], j, s));
}

TEST(Print, SchemaRoundTrip) {
  const char* text = R"(
relation E(eoid OID(E), ssn, name VALUE NULLABLE domain {"x", 3})
relation W(eoid OID(E), d)
key E(ssn)
inclusion2 E.eoid <=> E.ssn
inclusion W.eoid <= E.eoid
inclusion W(eoid, d) <= W(eoid, d)
domain_not_in W.d in {"k"}
not_null W.d
mvd W: eoid ->> d
assert_eq pi[eoid](W) == rho[ssn->eoid:OID(E)](pi[ssn](E))
assert_subset sigma[d = "k" and d is not null](W) <= W
assert_empty sigma[false](outerjoin(E, W, pad[z](W)))
)";
  auto s = parse_schema(text);
  EXPECT_TRUE(validate_schema(s).empty()) << validate_schema(s).front().str();
  EXPECT_EQ(parse_schema(print_schema(s)), s);
  EXPECT_EQ(print_schema(parse_schema(print_schema(s))), print_schema(s));
}

TEST(Print, InstanceRoundTrip) {
  auto s = parse_schema("relation E(eoid OID(E), name VALUE NULLABLE)");
  auto i = inst(R"(E(E:1, "a b")
E(E:x, NULL)
E(E:"q r", -4))", s);
  EXPECT_EQ(parse_instance(print_instance(i, s), s), i);
}

TEST(Parse, ErrorsCarryPosition) {
  try {
    parse_schema("relation p(a,\n  b c)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}
