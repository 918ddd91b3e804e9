#include "lossless/verify.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "lossless/error.hpp"
#include "lossless/print.hpp"

namespace lossless {

const char* direction_name(Direction d) {
  return d == Direction::ForwardDominance ? "FORWARD_DOMINANCE" : "EQUIVALENCE";
}

const char* status_name(Status s) {
  switch (s) {
    case Status::Verified: return "VERIFIED";
    case Status::Counterexample: return "COUNTEREXAMPLE";
    case Status::DomainMissing: return "DOMAIN_MISSING";
  }
  return "?";
}

namespace {

std::optional<std::string> legality_problem(const Schema& s, const Instance& i) {
  if (!conforms(s, i)) return "NULL, arity or sort of a stored value";
  int v = first_violation(s, i);
  if (v >= 0) return to_string(s.constraints[static_cast<std::size_t>(v)]);
  return std::nullopt;
}

// Checks one instance of `from`; returns the counterexample if it fails.
std::optional<Counterexample> check_one(const Schema& from, const Mapping& there, const Schema& to,
                                        const Mapping& back, const Instance& i, bool up_to_oids, const char* side) {
  Counterexample c{side, i, {}, {}, {}};
  c.image = apply_mapping(there, i, from);
  if (auto p = legality_problem(to, c.image)) {
    c.violation = "image violates " + *p;
    return c;
  }
  c.round_trip = apply_mapping(back, c.image, to);
  if (up_to_oids) {
    // Legality of the preimage matters before comparing.
    if (auto p = legality_problem(from, c.round_trip)) {
      c.violation = "round trip violates " + *p;
      return c;
    }
  }
  const bool same = up_to_oids ? equal_up_to_oids(i, c.round_trip) : i == c.round_trip;
  if (!same) {
    c.violation = "round trip differs from the original";
    return c;
  }
  return std::nullopt;
}

std::size_t run_side(const Schema& from, const Mapping& there, const Schema& to, const Mapping& back,
                     const DomainSpec& domains, const EnumerationBounds& bounds, bool up_to_oids, const char* side,
                     std::optional<Counterexample>& found) {
  return for_each_legal_instance(from, domains, bounds, [&](const Instance& i) {
    found = check_one(from, there, to, back, i, up_to_oids, side);
    return !found;
  });
}

using OidMap = std::map<Value, Value>;

Value map_value(const Value& v, const OidMap& m) {
  if (!v.is_oid()) return v;
  auto it = m.find(v);
  return it == m.end() ? v : it->second;
}

Instance rename_oids(const Instance& i, const OidMap& m) {
  Instance out;
  for (const auto& [name, rows] : i.relations) {
    auto& dst = out[name];
    for (const auto& t : rows) {
      Tuple u;
      for (const auto& v : t) u.push_back(map_value(v, m));
      dst.insert(std::move(u));
    }
  }
  return out;
}

std::map<std::string, std::vector<Value>> oids_by_tag(const Instance& i) {
  std::map<std::string, std::set<Value>> sets;
  for (const auto& [name, rows] : i.relations) {
    for (const auto& t : rows) {
      for (const auto& v : t) {
        if (v.is_oid()) sets[v.as_oid().tag].insert(v);
      }
    }
  }
  std::map<std::string, std::vector<Value>> out;
  for (auto& [tag, s] : sets) out[tag] = {s.begin(), s.end()};
  return out;
}

}  // namespace

bool equal_up_to_oids(const Instance& a, const Instance& b) {
  if (a == b) return true;
  auto oa = oids_by_tag(a), ob = oids_by_tag(b);
  if (oa.size() != ob.size()) return false;
  std::vector<std::pair<std::vector<Value>, std::vector<Value>>> groups;
  for (auto& [tag, vs] : oa) {
    auto it = ob.find(tag);
    if (it == ob.end() || it->second.size() != vs.size()) return false;
    groups.push_back({vs, it->second});
  }
  // Try every per-tag bijection.
  OidMap m;
  std::function<bool(std::size_t)> search = [&](std::size_t g) {
    if (g == groups.size()) return rename_oids(a, m) == b;
    auto& [from, to] = groups[g];
    std::vector<Value> perm = to;
    std::sort(perm.begin(), perm.end());
    do {
      for (std::size_t i = 0; i < from.size(); ++i) m[from[i]] = perm[i];
      if (search(g + 1)) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
  };
  return search(0);
}

VerificationReport verify_dominance(const CompiledTransform& t, const VerificationConfig& cfg) {
  VerificationReport r;
  r.direction = Direction::ForwardDominance;
  try {
    r.source_instances =
        run_side(t.source, t.fwd, t.target, t.bwd, cfg.domains, cfg.bounds, false, "source", r.counterexample);
  } catch (const Error& e) {
    if (e.code() != Errc::DomainMissing) throw;
    r.status = Status::DomainMissing;
    r.message = e.message();
    return r;
  }
  if (r.counterexample) r.status = Status::Counterexample;
  return r;
}

VerificationReport verify_equivalence(const CompiledTransform& t, const VerificationConfig& cfg) {
  VerificationReport r = verify_dominance(t, cfg);
  r.direction = Direction::Equivalence;
  if (r.status != Status::Verified) return r;
  try {
    r.target_instances = run_side(t.target, t.bwd, t.source, t.fwd, cfg.target_domains.value_or(cfg.domains),
                                  cfg.target_bounds.value_or(cfg.bounds), true, "target", r.counterexample);
  } catch (const Error& e) {
    if (e.code() != Errc::DomainMissing) throw;
    r.status = Status::DomainMissing;
    r.message = e.message();
    return r;
  }
  if (r.counterexample) r.status = Status::Counterexample;
  return r;
}

VerificationReport verify(const CompiledTransform& t, const VerificationConfig& cfg) {
  return cfg.direction == Direction::Equivalence ? verify_equivalence(t, cfg) : verify_dominance(t, cfg);
}

bool counterexample_fails(const CompiledTransform& t, const Counterexample& c) {
  if (c.side == "source") {
    if (legality_problem(t.source, c.instance)) return false;
    return check_one(t.source, t.fwd, t.target, t.bwd, c.instance, false, "source").has_value();
  }
  if (legality_problem(t.target, c.instance)) return false;
  return check_one(t.target, t.bwd, t.source, t.fwd, c.instance, true, "target").has_value();
}

namespace {

std::string bounds_text(const VerificationConfig& cfg) {
  std::string out = "tuples=";
  out += cfg.bounds.max_tuples_per_relation ? std::to_string(*cfg.bounds.max_tuples_per_relation) : "inf";
  out += " values=" + std::to_string(cfg.domains.values.size());
  return out;
}

std::string indent(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) out += "    " + line + "\n";
  return out.empty() ? "    (empty)\n" : out;
}

}  // namespace

std::string render_text(const VerificationReport& r, const CompiledTransform& t, const VerificationConfig& cfg) {
  std::ostringstream out;
  out << status_name(r.status) << " (" << direction_name(r.direction) << ", " << bounds_text(cfg) << ")\n";
  out << "source instances checked: " << r.source_instances << "\n";
  if (r.direction == Direction::Equivalence) out << "target instances checked: " << r.target_instances << "\n";
  if (!r.message.empty()) out << r.message << "\n";
  if (const auto& c = r.counterexample) {
    const bool src = c->side == "source";
    const Schema& here = src ? t.source : t.target;
    const Schema& there = src ? t.target : t.source;
    out << "counterexample (" << c->side << " instance): " << c->violation << "\n";
    out << "  instance:\n" << indent(print_instance(c->instance, here));
    out << "  image:\n" << indent(print_instance(c->image, there));
    if (!c->round_trip.relations.empty()) out << "  round trip:\n" << indent(print_instance(c->round_trip, here));
  }
  return out.str();
}

std::string render_kv(const VerificationReport& r, const VerificationConfig& cfg) {
  std::ostringstream out;
  out << "status=" << status_name(r.status) << "\n";
  out << "direction=" << direction_name(r.direction) << "\n";
  out << "max_tuples=" << (cfg.bounds.max_tuples_per_relation ? std::to_string(*cfg.bounds.max_tuples_per_relation) : "inf")
      << "\n";
  out << "values=" << cfg.domains.values.size() << "\n";
  out << "source_instances=" << r.source_instances << "\n";
  out << "target_instances=" << r.target_instances << "\n";
  out << "instances_checked=" << r.instances_checked() << "\n";
  if (r.counterexample) {
    out << "counterexample_side=" << r.counterexample->side << "\n";
    out << "violation=" << r.counterexample->violation << "\n";
    out << "counterexample_tuples=" << r.counterexample->instance.total_tuples() << "\n";
  }
  if (!r.message.empty()) out << "message=" << r.message << "\n";
  return out.str();
}

}  // namespace lossless
