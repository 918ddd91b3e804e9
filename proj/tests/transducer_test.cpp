#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "lossless/enumerate.hpp"
#include "lossless/error.hpp"
#include "lossless/eval.hpp"
#include "lossless/transducer.hpp"

using namespace lossless;
namespace fx = testing_fixtures;

namespace {

struct Scenario {
  CompiledTransform t;
  Instance source;
  std::vector<Transaction> script;
};

Scenario load(const std::string& dir) {
  Scenario s{fx::transform(dir + "/source.schema", dir + "/plan.txt"), {}, {}};
  s.source = parse_instance(fx::text(dir + "/source.inst"), s.t.source);
  s.script = parse_script(fx::text(dir + "/updates.tx"), s.t.source, s.t.target);
  return s;
}

// Runs the script, checking sync after every transaction.
std::vector<TxResult> run_checked(const Scenario& sc) {
  std::vector<TxResult> out;
  TwinState state = make_twin(sc.t, sc.source);
  for (const auto& tx : sc.script) {
    auto res = apply_transaction(state, tx);
    if (res.accepted()) {
      EXPECT_EQ(res.state.epoch, state.epoch + 1);
      EXPECT_EQ(res.state.t_instance, apply_mapping(sc.t.fwd, res.state.s_instance, sc.t.source));
      EXPECT_EQ(res.state.s_instance, apply_mapping(sc.t.bwd, res.state.t_instance, sc.t.target));
      EXPECT_TRUE(conforms(sc.t.source, res.state.s_instance));
      EXPECT_TRUE(conforms(sc.t.target, res.state.t_instance));
    } else {
      EXPECT_TRUE(res.state == state);
    }
    if (tx.expect_accept) EXPECT_EQ(res.accepted(), *tx.expect_accept) << to_string(tx);
    state = res.state;
    out.push_back(std::move(res));
  }
  return out;
}

Transaction one(const Scenario& sc, const std::string& line) {
  auto txs = parse_script(line, sc.t.source, sc.t.target);
  EXPECT_EQ(txs.size(), 1u);
  return txs.at(0);
}

}  // namespace

TEST(Transducer, WorkedScript) {
  auto sc = load("worked");
  ASSERT_GE(sc.script.size(), 12u);
  auto results = run_checked(sc);
  std::size_t accepted = 0;
  for (const auto& r : results) accepted += r.accepted();
  EXPECT_GT(accepted, 0u);
  EXPECT_LT(accepted, results.size());
}

TEST(Transducer, Source2Script) { run_checked(load("source2")); }

TEST(Transducer, SourceInsertPropagates) {
  auto sc = load("worked");
  auto twin = make_twin(sc.t, sc.source);
  auto res = apply_transaction(twin, one(sc, "begin SOURCE; insert Source(\"s3\", \"p9\", \"n3\", NULL, NULL); commit"));
  ASSERT_TRUE(res.accepted());
  const auto& t = res.state.t_instance;
  auto diff = [&](const std::string& rel) { return t.at(rel).size() - twin.t_instance.at(rel).size(); };
  EXPECT_EQ(diff("Person"), 1u);
  EXPECT_EQ(diff("Person-ssn"), 1u);
  EXPECT_EQ(diff("has-name"), 1u);
  EXPECT_EQ(diff("has-phone"), 1u);
  EXPECT_EQ(diff("Employee"), 0u);
  EXPECT_EQ(diff("works-in"), 0u);
  EXPECT_EQ(diff("Department"), 0u);
}

TEST(Transducer, TargetInsertAddsSourceRow) {
  auto sc = load("worked");
  auto twin = make_twin(sc.t, sc.source);
  twin = apply_transaction(twin, one(sc, "begin SOURCE; insert Source(\"s3\", \"p9\", \"n3\", NULL, NULL); commit")).state;
  auto res = apply_transaction(twin, one(sc, "begin TARGET; insert has-phone(P:s3, \"555\"); commit"));
  ASSERT_TRUE(res.accepted());
  auto src = parse_instance("Source(\"s3\", \"555\", \"n3\", NULL, NULL)", sc.t.source);
  EXPECT_EQ(res.state.s_instance.at("Source").count(*src.at("Source").begin()), 1u);
}

TEST(Transducer, DanglingOidIsRejected) {
  auto sc = load("worked");
  auto twin = make_twin(sc.t, sc.source);
  auto res = apply_transaction(twin, one(sc, "begin TARGET; insert has-name(P:s9, \"Zed\"); commit"));
  ASSERT_FALSE(res.accepted());
  EXPECT_EQ(res.rejection->code, Errc::ConstraintViolation);
  EXPECT_EQ(res.rejection->side, Side::Target);
  EXPECT_NE(res.rejection->constraint.find("has-name"), std::string::npos);
  EXPECT_FALSE(res.rejection->witness.empty());
}

TEST(Transducer, OnlyPhoneDependsOnSourceDesign) {
  auto worked = load("worked");
  auto a = apply_transaction(make_twin(worked.t, worked.source),
                             one(worked, "begin TARGET; delete has-phone(P:s2, \"555-0201\"); commit"));
  EXPECT_FALSE(a.accepted());
  auto split = load("source2");
  auto b = apply_transaction(make_twin(split.t, split.source),
                             one(split, "begin TARGET; delete has-phone(P:s2, \"555-0201\"); commit"));
  EXPECT_TRUE(b.accepted());
}

TEST(Transducer, NotRepresentable) {
  auto sc = load("worked");
  auto twin = make_twin(sc.t, sc.source);
  auto res = apply_transaction(twin, one(sc,
                                          "begin TARGET; insert Person(P:x); insert Person-ssn(P:x, \"s8\"); "
                                          "insert has-name(P:x, \"Hal\"); insert has-phone(P:x, \"555-0801\"); commit"));
  ASSERT_FALSE(res.accepted());
  EXPECT_EQ(res.rejection->code, Errc::NotRepresentable);
}

TEST(Transducer, ScriptErrors) {
  auto sc = load("worked");
  auto code = [&](const std::string& text) -> std::optional<Errc> {
    try {
      parse_script(text, sc.t.source, sc.t.target);
    } catch (const Error& e) {
      return e.code();
    }
    return std::nullopt;
  };
  EXPECT_EQ(code("begin SOURCE; insert Nope(1); commit"), Errc::ParseError);
  EXPECT_EQ(code("begin SOURCE; insert Source(\"s1\"); commit"), Errc::ParseError);
  EXPECT_EQ(code("begin SOURCE; insert Person(P:s1); commit"), Errc::ParseError);
  EXPECT_EQ(code("begin SOURCE; insert Source(\"s3\", \"p\", \"n\", NULL, NULL)"), Errc::ParseError);
  EXPECT_EQ(code("begin SIDEWAYS; commit"), Errc::ParseError);
}

TEST(Transducer, ScriptPrintRoundTrip) {
  auto sc = load("worked");
  std::string text;
  for (const auto& tx : sc.script) text += to_string(tx) + "\n";
  auto again = parse_script(text, sc.t.source, sc.t.target);
  ASSERT_EQ(again.size(), sc.script.size());
  for (std::size_t i = 0; i < again.size(); ++i) EXPECT_EQ(to_string(again[i]), to_string(sc.script[i]));
}

TEST(QueryTranslation, VerticalBothWays) {
  auto t = fx::transform("vertical/source.schema", "vertical/plan.txt");
  auto dom = DomainSpec::integers(2);
  auto sources = legal_instances(t.source, dom, {});
  auto targets = legal_instances(t.target, dom, {});
  auto check = [&](const std::string& file, Side from) {
    std::istringstream in(fx::text(file));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto q = parse_expr(line);
      auto tq = translate_query(q, t, from);
      const auto& own = from == Side::Target ? t.target : t.source;
      const auto& other = from == Side::Target ? t.source : t.target;
      const auto& map = from == Side::Target ? t.fwd : t.bwd;
      for (const auto& inst : from == Side::Target ? sources : targets) {
        auto direct = evaluate(q, apply_mapping(map, inst, other), own);
        EXPECT_EQ(evaluate(tq, inst, other).rows, direct.rows) << line;
      }
    }
  };
  check("vertical/queries_target.txt", Side::Target);
  check("vertical/queries_source.txt", Side::Source);
}

TEST(Sql, VerticalBundle) {
  auto t = fx::transform("vertical/source.schema", "vertical/plan.txt");
  auto bundle = emit_sql(t);
  EXPECT_NE(bundle.file("schema_s.sql").find("CREATE TABLE src.\"p\""), std::string::npos);
  EXPECT_NE(bundle.file("schema_t.sql").find("CREATE TABLE tgt.\"q\""), std::string::npos);
  EXPECT_NE(bundle.file("triggers.sql").find("lossless_guard"), std::string::npos);
  EXPECT_EQ(bundle.triggers.size(), 6u);  // three tables, insert and delete
  auto again = emit_sql(t);
  EXPECT_EQ(bundle.files, again.files);
}

TEST(Sql, IdentityTransformMirrorsTables) {
  auto t = identity_transform(fx::schema("vertical/source.schema"));
  auto bundle = emit_sql(t);
  EXPECT_NE(bundle.file("schema_s.sql").find("CREATE TABLE src.\"p\""), std::string::npos);
  EXPECT_NE(bundle.file("schema_t.sql").find("CREATE TABLE tgt.\"p\""), std::string::npos);
}

TEST(Sql, StrictRefusesAssertions) {
  auto t = fx::transform("worked/source.schema", "worked/plan.txt");
  auto bundle = emit_sql(t);
  if (bundle.unsupported.empty()) GTEST_SKIP();
  try {
    emit_sql(t, {.strict = true});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnsupportedConstraintForDialect);
  }
}

TEST(Sql, ReplayMatchesSimulator) {
  for (const char* dir : {"worked", "source2"}) {
    auto sc = load(dir);
    auto results = run_checked(sc);
    auto replay = replay_bundle(emit_sql(sc.t), sc.t, sc.source, sc.script);
    ASSERT_EQ(replay.accepted.size(), results.size());
    for (std::size_t i = 0; i < results.size(); ++i) EXPECT_EQ(replay.accepted[i], results[i].accepted()) << dir << " tx " << i;
    EXPECT_EQ(replay.s_instance, results.back().state.s_instance);
    EXPECT_EQ(replay.t_instance, results.back().state.t_instance);
    EXPECT_GT(replay.suppressed_firings, 0u);
  }
}
