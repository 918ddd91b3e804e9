#include "lossless/carm.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "lossless/error.hpp"
#include "lossless/print.hpp"
#include "pattern_util.hpp"

namespace lossless {

using detail::Names;

const char* carm_class_name(CarmClass c) {
  switch (c) {
    case CarmClass::Anchor: return "anchor";
    case CarmClass::Identification: return "identification";
    case CarmClass::AttributeFact: return "attribute fact";
    case CarmClass::RelationshipFact: return "relationship fact";
  }
  return "?";
}

CarmClass CarmSchema::class_of(const std::string& relation) const {
  auto in = [&](const std::vector<std::string>& xs) { return std::find(xs.begin(), xs.end(), relation) != xs.end(); };
  if (in(anchors)) return CarmClass::Anchor;
  if (in(identifications)) return CarmClass::Identification;
  if (in(attribute_facts)) return CarmClass::AttributeFact;
  if (in(relationship_facts)) return CarmClass::RelationshipFact;
  throw Error(Errc::UnknownRelation, relation);
}

namespace {

bool has_key_correspondence(const Schema& s, const std::string& rel) {
  for (const auto& c : s.constraints) {
    if (const auto* inc = std::get_if<Inclusion>(&c)) {
      if (inc->from.relation == rel && is_key_correspondence(*inc, s)) return true;
    }
  }
  return false;
}

std::optional<CarmClass> shape_class(const Schema& s, const RelationSignature& r, std::vector<Diagnostic>& out) {
  std::size_t oids = 0, values = 0;
  for (const auto& a : r.attributes) {
    (a.sort.is_oid() ? oids : values)++;
    if (a.nullable) out.push_back({r.name, "nullable attribute", a.name});
  }
  if (oids == 0) {
    out.push_back({r.name, "no OID attribute", ""});
    return std::nullopt;
  }
  if (values > 1) {
    out.push_back({r.name, "two VALUE attributes", std::to_string(values) + " VALUE attributes alongside OIDs"});
    return std::nullopt;
  }
  if (values == 0) return oids == 1 ? CarmClass::Anchor : CarmClass::RelationshipFact;
  if (oids > 1) return CarmClass::RelationshipFact;
  return has_key_correspondence(s, r.name) ? CarmClass::Identification : CarmClass::AttributeFact;
}

bool oid_attr(const Schema& s, const std::string& rel, const std::string& attr) {
  const auto* r = s.find(rel);
  const auto* a = r ? r->find(attr) : nullptr;
  return a && a->sort.is_oid();
}

void check_constraint(const Schema& s, const Constraint& c, std::vector<Diagnostic>& out) {
  const std::string subject = to_string(c);
  if (const auto* fd = std::get_if<FunctionalDep>(&c)) {
    const auto* r = s.find(fd->relation);
    if (!r) return;
    auto cl = detail::closure(fd->lhs, detail::implied_fds(s, fd->relation));
    if (!detail::subset_of(r->attribute_names(), cl)) out.push_back({subject, "non-key functional dependency", ""});
    return;
  }
  if (const auto* inc = std::get_if<Inclusion>(&c)) {
    if (is_key_correspondence(*inc, s)) return;
    if (inc->from.attrs.size() != 1) {
      out.push_back({subject, "non-unary inclusion", ""});
      return;
    }
    if (!oid_attr(s, inc->from.relation, inc->from.attrs[0]) || !oid_attr(s, inc->to.relation, inc->to.attrs[0])) {
      out.push_back({subject, "inclusion over VALUE attributes", ""});
    }
    return;
  }
  out.push_back({subject, "constraint outside the CARM whitelist", ""});
}

}  // namespace

std::vector<Diagnostic> check_carm_form(const Schema& schema) {
  std::vector<Diagnostic> out;
  for (const auto& r : schema.relations) shape_class(schema, r, out);
  for (const auto& c : schema.constraints) check_constraint(schema, c, out);
  return out;
}

CarmSchema classify_carm(const Schema& schema) {
  auto diags = check_carm_form(schema);
  if (!diags.empty()) throw Error(Errc::NotInCarmForm, diags.front().str());
  CarmSchema out;
  out.schema = schema;
  std::vector<Diagnostic> unused;
  for (const auto& r : schema.relations) {
    switch (*shape_class(schema, r, unused)) {
      case CarmClass::Anchor: out.anchors.push_back(r.name); break;
      case CarmClass::Identification: out.identifications.push_back(r.name); break;
      case CarmClass::AttributeFact: out.attribute_facts.push_back(r.name); break;
      case CarmClass::RelationshipFact: out.relationship_facts.push_back(r.name); break;
    }
  }
  return out;
}

VerificationConfig CarmOptions::standard_gate() {
  VerificationConfig cfg;
  cfg.domains = DomainSpec::integers(2);
  cfg.bounds.max_tuples_per_relation = 2;
  cfg.direction = Direction::Equivalence;
  return cfg;
}

std::pair<CarmSchema, CompiledTransform> derive_carm(const Schema& source, const std::vector<TransformStep>& plan,
                                                     const CarmOptions& options) {
  CompiledTransform t = compose_plan(source, plan);
  CarmSchema carm = classify_carm(t.target);
  if (options.gate) {
    auto r = verify_equivalence(t, *options.gate);
    if (r.status == Status::Counterexample) {
      throw Error(Errc::NotInCarmForm, "transform is not lossless: " + r.counterexample->violation);
    }
    if (r.status == Status::DomainMissing) throw Error(Errc::DomainMissing, r.message);
  }
  return {std::move(carm), std::move(t)};
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

class DotWriter {
 public:
  explicit DotWriter(const CarmSchema& c) : carm_(c), s_(c.schema) {
    // Subtype links between anchors.
    for (const auto& c : s_.constraints) {
      const auto* inc = std::get_if<Inclusion>(&c);
      if (!inc || inc->bidirectional) continue;
      if (is_anchor(inc->from.relation) && is_anchor(inc->to.relation)) supertype_[inc->from.relation] = inc->to.relation;
    }
  }

  std::string run() {
    out_ << "digraph carm {\n  rankdir=LR;\n";
    for (const auto& a : carm_.anchors) out_ << "  " << quote(a) << " [shape=box];\n";
    for (const auto& [sub, super] : supertype_) {
      out_ << "  " << quote(sub) << " -> " << quote(super) << " [label=\"is-a\", arrowhead=empty];\n";
    }
    for (const auto& r : s_.relations) {
      switch (carm_.class_of(r.name)) {
        case CarmClass::Anchor: break;
        case CarmClass::Identification: value_edge(r, "style=dashed, "); break;
        case CarmClass::AttributeFact: value_edge(r, ""); break;
        case CarmClass::RelationshipFact: relationship(r); break;
      }
    }
    out_ << "}\n";
    return out_.str();
  }

 private:
  bool is_anchor(const std::string& r) const {
    return std::find(carm_.anchors.begin(), carm_.anchors.end(), r) != carm_.anchors.end();
  }

  int depth(const std::string& anchor) const {
    int d = 0;
    for (auto it = supertype_.find(anchor); it != supertype_.end() && d < 64; it = supertype_.find(it->second)) ++d;
    return d;
  }

  // Most specific anchor the attribute is declared to range over.
  std::string entity_of(const RelationSignature& r, const AttributeSpec& a) {
    std::string best;
    auto consider = [&](const std::string& anchor) {
      if (best.empty() || depth(anchor) > depth(best)) best = anchor;
    };
    for (const auto& c : s_.constraints) {
      const auto* inc = std::get_if<Inclusion>(&c);
      if (!inc || inc->from.attrs.size() != 1) continue;
      const bool from_here = inc->from.relation == r.name && inc->from.attrs[0] == a.name;
      const bool to_here = inc->to.relation == r.name && inc->to.attrs[0] == a.name;
      if (from_here && is_anchor(inc->to.relation)) consider(inc->to.relation);
      if (to_here && inc->bidirectional && is_anchor(inc->from.relation)) consider(inc->from.relation);
    }
    if (!best.empty()) return best;
    const std::string tag = a.sort.tag;
    for (const auto& anchor : carm_.anchors) {
      if (s_.at(anchor).attributes[0].sort.tag == tag && !supertype_.count(anchor)) return anchor;
    }
    if (!declared_tags_.count(tag)) {
      declared_tags_.insert(tag);
      out_ << "  " << quote(tag) << " [shape=box, style=dotted];\n";
    }
    return tag;
  }

  void value_edge(const RelationSignature& r, const char* style) {
    const AttributeSpec* oid = nullptr;
    const AttributeSpec* value = nullptr;
    for (const auto& a : r.attributes) (a.sort.is_oid() ? oid : value) = &a;
    const std::string entity = entity_of(r, *oid);
    const std::string node = entity + "." + value->name;
    out_ << "  " << quote(node) << " [shape=ellipse, label=" << quote(value->name) << "];\n";
    out_ << "  " << quote(entity) << " -> " << quote(node) << " [" << style << "label=" << quote(r.name) << "];\n";
  }

  void relationship(const RelationSignature& r) {
    std::vector<std::string> ends;
    const AttributeSpec* value = nullptr;
    for (const auto& a : r.attributes) {
      if (a.sort.is_oid()) {
        ends.push_back(entity_of(r, a));
      } else {
        value = &a;
      }
    }
    if (ends.size() == 2 && !value) {
      out_ << "  " << quote(ends[0]) << " -> " << quote(ends[1]) << " [label=" << quote(r.name) << "];\n";
      return;
    }
    out_ << "  " << quote(r.name) << " [shape=diamond];\n";
    for (const auto& e : ends) out_ << "  " << quote(r.name) << " -> " << quote(e) << ";\n";
    if (value) {
      const std::string node = r.name + "." + value->name;
      out_ << "  " << quote(node) << " [shape=ellipse, label=" << quote(value->name) << "];\n";
      out_ << "  " << quote(r.name) << " -> " << quote(node) << ";\n";
    }
  }

  const CarmSchema& carm_;
  const Schema& s_;
  std::map<std::string, std::string> supertype_;
  std::set<std::string> declared_tags_;
  std::ostringstream out_;
};

}  // namespace

std::string export_conceptual_dot(const CarmSchema& carm) { return DotWriter(carm).run(); }

}  // namespace lossless
