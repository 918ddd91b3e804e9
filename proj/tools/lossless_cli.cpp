#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>

#include "lossless/carm.hpp"
#include "lossless/error.hpp"
#include "lossless/parse.hpp"
#include "lossless/patterns.hpp"
#include "lossless/print.hpp"
#include "lossless/schema.hpp"
#include "lossless/transducer.hpp"
#include "lossless/verify.hpp"

namespace fs = std::filesystem;
using namespace lossless;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct RunConfig {
  std::string schema_path, plan_path, instance_path, script_path;
  std::string target_path, fwd_path, bwd_path;
  std::string bounds = "k=2";
  std::string out_dir;
  std::string format;
  std::string direction = "equivalence";
};

// "k=2,tuples=3"; tuples absent means unbounded.
VerificationConfig parse_bounds(const std::string& text, const std::string& direction) {
  VerificationConfig cfg;
  cfg.domains = DomainSpec::integers(2);
  std::regex item(R"(\s*(k|tuples)\s*=\s*(\d+)\s*)");
  std::size_t start = 0;
  while (start <= text.size() && !text.empty()) {
    auto end = text.find(',', start);
    std::string part = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    std::smatch m;
    if (!std::regex_match(part, m, item)) throw CLI::ValidationError("--bounds", "expected k=N,tuples=M, got '" + part + "'");
    const int n = std::stoi(m[2]);
    if (m[1] == "k") {
      if (n <= 0) throw CLI::ValidationError("--bounds", "k must be positive");
      cfg.domains = DomainSpec::integers(n);
    } else {
      cfg.bounds.max_tuples_per_relation = static_cast<std::size_t>(n);
    }
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (direction == "dominance") {
    cfg.direction = Direction::ForwardDominance;
  } else if (direction == "equivalence") {
    cfg.direction = Direction::Equivalence;
  } else {
    throw CLI::ValidationError("--direction", "expected equivalence or dominance");
  }
  return cfg;
}

void write_out(const std::string& dir, const std::string& name, const std::string& text) {
  if (dir.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(dir);
  std::ofstream f(fs::path(dir) / name, std::ios::binary);
  f << text;
  if (!f) throw Error(Errc::InvalidSchema, "cannot write " + (fs::path(dir) / name).string());
}

std::vector<TransformStep> load_plan(const RunConfig& c) {
  return c.plan_path.empty() ? std::vector<TransformStep>{} : parse_plan(read_file(c.plan_path));
}

CompiledTransform load_transform(const RunConfig& c) {
  Schema s = parse_schema(read_file(c.schema_path));
  if (auto d = validate_schema(s); !d.empty()) throw Error(Errc::InvalidSchema, d.front().str());
  if (!c.target_path.empty()) {
    if (!c.plan_path.empty()) throw CLI::ValidationError("--plan", "give either --plan or --target/--fwd/--bwd");
    if (c.fwd_path.empty() || c.bwd_path.empty()) throw CLI::ValidationError("--target", "needs --fwd and --bwd");
    CompiledTransform t;
    t.source = std::move(s);
    t.target = parse_schema(read_file(c.target_path));
    t.fwd = parse_mapping(read_file(c.fwd_path));
    t.bwd = parse_mapping(read_file(c.bwd_path));
    for (const auto& d : validate_schema(t.target)) throw Error(Errc::InvalidSchema, "target: " + d.str());
    for (const auto& d : validate_mapping(t.source, t.target, t.fwd)) throw Error(Errc::InvalidSchema, "fwd: " + d.str());
    for (const auto& d : validate_mapping(t.target, t.source, t.bwd)) throw Error(Errc::InvalidSchema, "bwd: " + d.str());
    return t;
  }
  return compose_plan(s, load_plan(c));
}

int cmd_check(const RunConfig& c) {
  Schema s = parse_schema(read_file(c.schema_path));
  auto diags = validate_schema(s);
  for (const auto& d : diags) std::cout << d.str() << "\n";
  if (diags.empty()) std::cout << "ok: relations=" << s.relations.size() << " constraints=" << s.constraints.size() << "\n";
  return diags.empty() ? kOk : kFailed;
}

int cmd_plan(const RunConfig& c) {
  std::cout << print_transform(load_transform(c));
  return kOk;
}

int cmd_verify(const RunConfig& c) {
  auto cfg = parse_bounds(c.bounds, c.direction);
  auto t = load_transform(c);
  auto r = verify(t, cfg);
  std::cout << (c.format == "kv" ? render_kv(r, cfg) : render_text(r, t, cfg));
  return r.status == Status::Verified ? kOk : kFailed;
}

int cmd_emit(const RunConfig& c) {
  auto t = load_transform(c);
  if (c.format == "dot") {
    CarmSchema carm = classify_carm(t.target);
    if (c.target_path.empty()) carm = derive_carm(t.source, load_plan(c)).first;
    write_out(c.out_dir, "conceptual.dot", export_conceptual_dot(carm));
    return kOk;
  }
  if (c.format == "text") {
    write_out(c.out_dir, "transform.txt", print_transform(t));
    return kOk;
  }
  auto bundle = emit_sql(t);
  for (const auto& [name, text] : bundle.files) {
    if (c.out_dir.empty()) {
      std::cout << "-- file: " << name << "\n" << text;
    } else {
      write_out(c.out_dir, name, text);
    }
  }
  for (const auto& u : bundle.unsupported) std::cerr << "assertion only: " << u << "\n";
  return kOk;
}

int cmd_simulate(const RunConfig& c) {
  auto t = load_transform(c);
  Instance start = c.instance_path.empty() ? Instance::empty_for(t.source)
                                           : parse_instance(read_file(c.instance_path), t.source);
  auto script = parse_script(read_file(c.script_path), t.source, t.target);
  TwinState st = make_twin(t, start);
  bool unexpected = false;
  for (std::size_t i = 0; i < script.size(); ++i) {
    const auto& tx = script[i];
    auto r = apply_transaction(st, tx);
    std::cout << "tx " << i + 1 << " " << (r.accepted() ? "ACCEPT" : "REJECT") << " " << to_string(tx) << "\n";
    if (!r.accepted()) std::cout << "  " << r.rejection->str() << "\n";
    const bool expected = tx.expect_accept.value_or(true);
    if (expected != r.accepted()) {
      unexpected = true;
      std::cerr << "tx " << i + 1 << ": expected " << (expected ? "accept" : "reject") << "\n";
    }
    st = std::move(r.state);
  }
  std::cout << "# epoch " << st.epoch << "\n# source\n" << print_instance(st.s_instance, t.source);
  std::cout << "# target\n" << print_instance(st.t_instance, t.target);
  return unexpected ? kFailed : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lossless schema transformations: plan, verify, derive the conceptual model, simulate, emit SQL"};
  app.require_subcommand(1);
  RunConfig c;

  auto* check = app.add_subcommand("check", "Parse and validate a schema");
  check->add_option("--schema", c.schema_path, "Schema file")->required()->check(CLI::ExistingFile);

  auto* plan = app.add_subcommand("plan", "Apply a plan and print the target schema and both mappings");
  auto* verify_cmd = app.add_subcommand("verify", "Check losslessness by exhaustive enumeration");
  auto* emit = app.add_subcommand("emit", "Write the SQL bundle, the conceptual DOT graph or the transform text");
  auto* simulate = app.add_subcommand("simulate", "Replay an update script on the twin databases");
  for (auto* sub : {plan, verify_cmd, emit, simulate}) {
    sub->add_option("--schema", c.schema_path, "Source schema file")->required()->check(CLI::ExistingFile);
    sub->add_option("--plan", c.plan_path, "Plan file (empty plan when omitted)")->check(CLI::ExistingFile);
    sub->add_option("--target", c.target_path, "Target schema, instead of a plan")->check(CLI::ExistingFile);
    sub->add_option("--fwd", c.fwd_path, "Forward views with --target")->check(CLI::ExistingFile);
    sub->add_option("--bwd", c.bwd_path, "Backward views with --target")->check(CLI::ExistingFile);
  }
  verify_cmd->add_option("--bounds", c.bounds, "k=N values per VALUE attribute, tuples=M per relation")
      ->capture_default_str();
  verify_cmd->add_option("--direction", c.direction, "equivalence or dominance")->capture_default_str();
  verify_cmd->add_option("--format", c.format, "text or kv")->check(CLI::IsMember({"text", "kv"}));
  emit->add_option("--format", c.format, "sql, dot or text")->check(CLI::IsMember({"sql", "dot", "text"}));
  emit->add_option("--out", c.out_dir, "Output directory (stdout when omitted)");
  simulate->add_option("--instance", c.instance_path, "Initial source instance")->check(CLI::ExistingFile);
  simulate->add_option("--script", c.script_path, "Update script")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (check->parsed()) return cmd_check(c);
    if (plan->parsed()) return cmd_plan(c);
    if (verify_cmd->parsed()) return cmd_verify(c);
    if (emit->parsed()) return cmd_emit(c);
    if (simulate->parsed()) return cmd_simulate(c);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
