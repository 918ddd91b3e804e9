#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "lossless/carm.hpp"
#include "lossless/enumerate.hpp"
#include "lossless/error.hpp"
#include "lossless/parse.hpp"
#include "lossless/patterns.hpp"
#include "lossless/print.hpp"
#include "lossless/transducer.hpp"
#include "lossless/verify.hpp"
#include "oracle.hpp"

using namespace lossless;

namespace {

std::string fixture(const std::string& rel) { return std::string(LOSSLESS_FIXTURES) + "/" + rel; }
std::string text(const std::string& rel) { return read_file(fixture(rel)); }
Schema schema(const std::string& rel) { return parse_schema(text(rel)); }
CompiledTransform transform(const std::string& s, const std::string& p) {
  return compose_plan(schema(s), parse_plan(text(p)));
}

VerificationConfig bounds(int k, std::optional<std::size_t> tuples) {
  VerificationConfig cfg;
  cfg.domains = DomainSpec::integers(k);
  cfg.bounds.max_tuples_per_relation = tuples;
  return cfg;
}

// Each criterion returns an empty string on success, else the reason.
using Check = std::function<std::string(std::ostringstream& info)>;

int failures = 0;

void criterion(int n, const std::string& title, double limit_s, const Check& check) {
  std::ostringstream info;
  std::string reason;
  auto start = std::chrono::steady_clock::now();
  try {
    reason = check(info);
  } catch (const std::exception& e) {
    reason = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (reason.empty() && limit_s > 0 && secs >= limit_s) reason = "took " + std::to_string(secs) + " s";
  if (!reason.empty()) ++failures;
  std::printf("%s [%d] %s: %s (%.2f s%s)\n", reason.empty() ? "PASS" : "FAIL", n, title.c_str(),
              reason.empty() ? info.str().c_str() : reason.c_str(), secs,
              limit_s > 0 ? (", limit " + std::to_string(static_cast<int>(limit_s)) + " s").c_str() : "");
  std::fflush(stdout);
}

std::string verified(const VerificationReport& r, const CompiledTransform& t, const VerificationConfig& cfg) {
  if (r.status == Status::Verified) return "";
  return render_text(r, t, cfg);
}

std::string run_cli(const std::string& args) {
  std::string cmd = std::string(LOSSLESS_CLI) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw std::runtime_error("cannot run " + cmd);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  int rc = pclose(p);
  if (rc != 0) throw std::runtime_error(cmd + " exited with " + std::to_string(rc));
  return out;
}

// Legal Source instances of the worked example, NULL encoded as -1.
std::size_t oracle_worked_source(std::size_t max_tuples) {
  oracle::Relation universe;
  for (int ssn = 0; ssn < 2; ++ssn)
    for (int phone = 0; phone < 2; ++phone)
      for (int name = 0; name < 2; ++name)
        for (int dep = -1; dep < 2; ++dep)
          for (int addr = -1; addr < 2; ++addr) universe.push_back({ssn, phone, name, dep, addr});
  return oracle::count_if_subsets(universe, max_tuples, [](const oracle::Relation& r) {
    for (const auto& row : r) {
      if ((row[3] < 0) != (row[4] < 0)) return false;
    }
    return oracle::fd_holds(r, {0, 1}, {2, 3, 4}) && oracle::fd_holds(r, {0}, {2, 3, 4}) &&
           oracle::fd_holds(r, {3}, {4}) && oracle::fd_holds(r, {4}, {3});
  });
}

}  // namespace

int main() {
  criterion(1, "vertical decomposition lossless", 5, [](std::ostringstream& info) -> std::string {
    auto t = transform("vertical/source.schema", "vertical/plan.txt");
    auto cfg = bounds(2, std::nullopt);
    const std::size_t expected =
        oracle::count_if_subsets(oracle::cube(2, 3), SIZE_MAX, [](const oracle::Relation& r) { return oracle::fd_holds(r, {1}, {2}); });
    auto r = verify_equivalence(t, cfg);
    info << "oracle=" << expected << " enumerated=" << r.source_instances << " target=" << r.target_instances;
    if (expected != 49) return "oracle counted " + std::to_string(expected);
    if (r.source_instances != expected) return "enumerated " + std::to_string(r.source_instances);
    return verified(r, t, cfg);
  });

  criterion(2, "horizontal decomposition lossless, mutation test", 30, [](std::ostringstream& info) -> std::string {
    auto t = transform("horizontal/source.schema", "horizontal/plan.txt");
    auto cfg = bounds(2, 3);
    auto r = verify_equivalence(t, cfg);
    if (auto bad = verified(r, t, cfg); !bad.empty()) return bad;
    info << "T=" << r.source_instances << " U=" << r.target_instances << "; dropped:";
    bool coverage = false, disjoint = false;
    for (std::size_t i = 0; i < t.target.constraints.size(); ++i) {
      auto m = t;
      m.target.constraints.erase(m.target.constraints.begin() + static_cast<long>(i));
      auto mr = verify_equivalence(m, cfg);
      const auto name = to_string(t.target.constraints[i]);
      const bool ce = mr.status == Status::Counterexample;
      info << " [" << name << "]=" << status_name(mr.status);
      if (name.rfind("assert_eq", 0) == 0) coverage = ce;
      if (name.rfind("assert_disjoint", 0) == 0) disjoint = ce;
    }
    if (t.target.constraints.size() != 6) return "U has " + std::to_string(t.target.constraints.size()) + " constraints";
    if (!coverage || !disjoint) return "coverage or disjointness mutant verified: " + info.str();
    return "";
  });

  criterion(3, "composed plan S to U", 0, [](std::ostringstream& info) -> std::string {
    auto source = schema("horizontal/s_source.schema");
    auto steps = parse_plan(text("horizontal/s_plan.txt"));
    auto t = compose_plan(source, steps);
    auto cfg = bounds(2, 3);
    auto r = verify_equivalence(t, cfg);
    if (auto bad = verified(r, t, cfg); !bad.empty()) return bad;
    std::vector<CompiledTransform> stages;
    Schema cur = source;
    for (const auto& s : steps) {
      stages.push_back(apply_step(cur, s));
      cur = stages.back().target;
    }
    std::size_t compared = 0;
    std::string mismatch;
    for_each_legal_instance(t.source, cfg.domains, cfg.bounds, [&](const Instance& i) {
      Instance x = i;
      for (const auto& st : stages) x = apply_mapping(st.fwd, x, st.source);
      ++compared;
      if (!(apply_mapping(t.fwd, i, t.source) == x)) mismatch = print_instance(i, t.source);
      return mismatch.empty();
    });
    for_each_legal_instance(t.target, cfg.domains, cfg.bounds, [&](const Instance& j) {
      Instance x = j;
      for (auto it = stages.rbegin(); it != stages.rend(); ++it) x = apply_mapping(it->bwd, x, it->target);
      ++compared;
      if (!(apply_mapping(t.bwd, j, t.target) == x)) mismatch = print_instance(j, t.target);
      return mismatch.empty();
    });
    info << "S=" << r.source_instances << " U=" << r.target_instances << " stepwise comparisons=" << compared;
    return mismatch.empty() ? "" : "composed and stepwise differ on\n" + mismatch;
  });

  criterion(4, "OID introduction golden and lossless", 0, [](std::ostringstream& info) -> std::string {
    auto t = compose_plan(schema("employee/source.schema"), parse_plan(text("employee/plan.txt")));
    auto golden = schema("employee/target.schema");
    if (print_schema(t.target) != print_schema(golden)) return "target differs:\n" + print_schema(t.target);
    if (t.target.constraints.size() != 6) return "constraint count " + std::to_string(t.target.constraints.size());
    auto cfg = bounds(2, 3);
    auto r = verify_equivalence(t, cfg);
    info << "golden matches; source=" << r.source_instances << " target=" << r.target_instances;
    return verified(r, t, cfg);
  });

  criterion(5, "worked example end to end", 0, [](std::ostringstream& info) -> std::string {
    auto [carm, t] = derive_carm(schema("worked/source.schema"), parse_plan(text("worked/plan.txt")), {std::nullopt});
    auto names = t.target.relation_names();
    std::sort(names.begin(), names.end());
    std::vector<std::string> expected{"Department", "Department-name", "Employee", "Person", "Person-ssn",
                                      "has-address", "has-name", "has-phone", "works-in"};
    std::sort(expected.begin(), expected.end());
    if (names != expected) return "relation names differ";
    if (auto ds = check_carm_form(t.target); !ds.empty()) return "not CARM: " + ds[0].subject + " " + ds[0].rule;
    auto golden = parse_mapping(text("worked/fwd.golden.map"));
    if (golden.views.size() != 9) return "golden has " + std::to_string(golden.views.size()) + " views";
    for (const auto& v : golden.views) {
      if (to_string(t.fwd.at(v.relation)) != to_string(v.expr)) return "fwd view differs: " + v.relation;
    }
    auto hand = parse_instance(text("worked/source.inst"), t.source);
    if (hand.at("Source").size() != 5) return "handcrafted instance has " + std::to_string(hand.at("Source").size()) + " rows";
    auto back = apply_mapping(t.bwd, apply_mapping(t.fwd, hand, t.source), t.target);
    if (!(back == hand)) return "handcrafted round trip differs";
    const std::size_t oracle_count = oracle_worked_source(2);
    auto cfg = bounds(2, 2);
    cfg.direction = Direction::ForwardDominance;
    auto r = verify(t, cfg);
    info << "nine relations, CARM ok, golden fwd, 5-row round trip, oracle=" << oracle_count
         << " round trips=" << r.source_instances;
    if (r.source_instances != oracle_count) return "enumerated " + std::to_string(r.source_instances) + ", oracle " + std::to_string(oracle_count);
    return verified(r, t, cfg);
  });

  criterion(6, "transducer synchronization", 0, [](std::ostringstream& info) -> std::string {
    std::size_t total = 0, accepts = 0, rejects = 0, source_side = 0, target_side = 0;
    for (const char* dir : {"worked", "source2"}) {
      const std::string d = dir;
      auto t = transform(d + "/source.schema", d + "/plan.txt");
      auto script = parse_script(text(d + "/updates.tx"), t.source, t.target);
      auto state = make_twin(t, parse_instance(text(d + "/source.inst"), t.source));
      for (std::size_t i = 0; i < script.size(); ++i) {
        const auto& tx = script[i];
        auto res = apply_transaction(state, tx);
        const std::string where = d + " tx " + std::to_string(i + 1);
        if (res.accepted()) {
          if (res.state.epoch != state.epoch + 1) return where + ": epoch did not advance by one";
          if (!(res.state.t_instance == apply_mapping(t.fwd, res.state.s_instance, t.source))) return where + ": t != fwd(s)";
          if (!(res.state.s_instance == apply_mapping(t.bwd, res.state.t_instance, t.target))) return where + ": s != bwd(t)";
          ++accepts;
        } else {
          if (!(res.state == state)) return where + ": rejected transaction changed state";
          ++rejects;
        }
        if (tx.expect_accept && *tx.expect_accept != res.accepted()) return where + ": unexpected outcome";
        (tx.side == Side::Source ? source_side : target_side)++;
        ++total;
        state = res.state;
      }
    }
    info << total << " transactions, " << accepts << " accepted, " << rejects << " rejected, " << source_side
         << " source side, " << target_side << " target side";
    if (total < 12 || !accepts || !rejects || !source_side || !target_side) return "coverage too small: " + info.str();
    return "";
  });

  criterion(7, "query translation", 0, [](std::ostringstream& info) -> std::string {
    auto t = transform("vertical/source.schema", "vertical/plan.txt");
    auto dom = DomainSpec::integers(2);
    auto sources = legal_instances(t.source, dom, {});
    auto targets = legal_instances(t.target, dom, {});
    std::size_t checks = 0;
    for (Side from : {Side::Target, Side::Source}) {
      const bool tgt = from == Side::Target;
      std::istringstream in(text(tgt ? "vertical/queries_target.txt" : "vertical/queries_source.txt"));
      std::string line;
      std::size_t queries = 0;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++queries;
        auto q = parse_expr(line);
        auto tq = translate_query(q, t, from);
        for (const auto& inst : tgt ? sources : targets) {
          auto image = apply_mapping(tgt ? t.fwd : t.bwd, inst, tgt ? t.source : t.target);
          if (evaluate(tq, inst, tgt ? t.source : t.target).rows != evaluate(q, image, tgt ? t.target : t.source).rows) {
            return std::string(side_name(from)) + " query differs: " + line;
          }
          ++checks;
        }
      }
      if (queries != 10) return std::to_string(queries) + " queries for " + side_name(from);
    }
    info << "20 queries, " << sources.size() << " source and " << targets.size() << " target instances, " << checks
         << " comparisons";
    if (sources.size() != 49 || targets.size() != 49) return "instance counts differ from 49";
    return "";
  });

  criterion(8, "deterministic output", 0, [](std::ostringstream& info) -> std::string {
    const std::string base = "--schema " + fixture("worked/source.schema") + " --plan " + fixture("worked/plan.txt");
    for (const std::string cmd : {"plan " + base, "emit --format sql " + base, "emit --format dot " + base}) {
      const auto first = run_cli(cmd);
      for (int i = 0; i < 2; ++i) {
        if (run_cli(cmd) != first) return "output changed: " + cmd.substr(0, cmd.find(' ', 5));
      }
      info << cmd.substr(0, cmd.find(" --schema")) << " " << first.size() << " bytes; ";
    }
    return "";
  });

  std::printf("%s: %d of 8 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
