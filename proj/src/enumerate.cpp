#include "lossless/enumerate.hpp"

#include <algorithm>
#include <numeric>

#include "lossless/error.hpp"

namespace lossless {

DomainSpec DomainSpec::integers(int k) {
  DomainSpec d;
  for (int i = 0; i < k; ++i) d.values.push_back(Value::integer(i));
  return d;
}

namespace {

const std::vector<Value>* override_for(const DomainSpec& d, const RelationSignature& rel, const AttributeSpec& attr) {
  if (auto it = d.attributes.find(rel.name + "." + attr.name); it != d.attributes.end()) return &it->second;
  if (auto it = d.attributes.find(attr.name); it != d.attributes.end()) return &it->second;
  if (attr.enum_domain) return &*attr.enum_domain;
  return nullptr;
}

std::size_t largest_value_domain(const Schema& schema, const DomainSpec& d) {
  std::size_t k = d.values.size();
  for (const auto& r : schema.relations) {
    for (const auto& a : r.attributes) {
      if (a.sort.is_oid()) continue;
      if (const auto* o = override_for(d, r, a)) k = std::max(k, o->size());
    }
  }
  return k;
}

// Constraints that stay violated when tuples are added to their relation.
bool anti_monotone(const Constraint& c, const Schema& schema) {
  if (std::holds_alternative<FunctionalDep>(c) || std::holds_alternative<DomainIn>(c) ||
      std::holds_alternative<DomainNotIn>(c) || std::holds_alternative<NotNull>(c)) {
    return true;
  }
  if (const auto* inc = std::get_if<Inclusion>(&c)) return is_key_correspondence(*inc, schema);
  return false;
}

struct Choices {
  std::vector<std::vector<Rows>> by_size;
};

Choices relation_choices(const Schema& schema, const RelationSignature& rel, const DomainSpec& domains,
                         std::size_t bound) {
  const auto candidates = candidate_tuples(schema, rel, domains);
  bound = std::min(bound, candidates.size());
  std::vector<const Constraint*> all, pruning;
  for (const auto& c : schema.constraints) {
    auto rels = constraint_relations(c);
    if (rels.size() == 1 && rels[0] == rel.name) {
      all.push_back(&c);
      if (anti_monotone(c, schema)) pruning.push_back(&c);
    }
  }
  Choices out;
  out.by_size.resize(bound + 1);
  Instance partial;
  Rows& rows = partial[rel.name];
  auto holds = [&](const std::vector<const Constraint*>& cs) {
    return std::all_of(cs.begin(), cs.end(), [&](const Constraint* c) { return check_constraint(*c, partial, schema); });
  };
  std::function<void(std::size_t)> extend = [&](std::size_t start) {
    if (holds(all)) out.by_size[rows.size()].push_back(rows);
    if (rows.size() == bound) return;
    for (std::size_t i = start; i < candidates.size(); ++i) {
      auto it = rows.insert(candidates[i]).first;
      if (holds(pruning)) extend(i + 1);
      rows.erase(it);
    }
  };
  extend(0);
  return out;
}

}  // namespace

std::vector<Value> DomainSpec::domain_for(const Schema& schema, const RelationSignature& rel,
                                          const AttributeSpec& attr) const {
  if (const auto* o = override_for(*this, rel, attr)) return *o;
  if (!attr.sort.is_oid()) {
    if (values.empty()) throw Error(Errc::DomainMissing, rel.name + "." + attr.name + " has no finite domain");
    return values;
  }
  if (auto it = oids.find(attr.sort.tag); it != oids.end()) return it->second;
  const std::size_t k = largest_value_domain(schema, *this);
  if (k == 0) throw Error(Errc::DomainMissing, rel.name + "." + attr.name + " has no finite domain");
  std::vector<Value> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(Value::oid(attr.sort.tag, static_cast<std::int64_t>(i)));
  return out;
}

std::vector<Tuple> candidate_tuples(const Schema& schema, const RelationSignature& rel, const DomainSpec& domains) {
  std::vector<std::vector<Value>> columns;
  for (const auto& a : rel.attributes) {
    auto vs = domains.domain_for(schema, rel, a);
    for (const auto& v : vs) {
      if (v.is_null() || !v.fits(a.sort)) {
        throw Error(Errc::SortMismatch, "domain value " + v.str() + " for " + rel.name + "." + a.name);
      }
    }
    if (a.nullable) vs.push_back(Value::null());
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    columns.push_back(std::move(vs));
  }
  std::vector<Tuple> out{Tuple{}};
  for (const auto& col : columns) {
    std::vector<Tuple> next;
    next.reserve(out.size() * col.size());
    for (const auto& t : out) {
      for (const auto& v : col) {
        Tuple u = t;
        u.push_back(v);
        next.push_back(std::move(u));
      }
    }
    out = std::move(next);
  }
  if (columns.empty()) out.clear();
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t for_each_legal_instance(const Schema& schema, const DomainSpec& domains, const EnumerationBounds& bounds,
                                    const std::function<bool(const Instance&)>& visit) {
  const std::size_t n = schema.relations.size();
  std::vector<Choices> choices;
  std::size_t max_total = 0;
  for (const auto& r : schema.relations) {
    choices.push_back(relation_choices(schema, r, domains, bounds.max_tuples_per_relation.value_or(SIZE_MAX)));
    max_total += choices.back().by_size.size() - 1;
  }

  // Cross-relation constraints, checked once their last relation is assigned.
  std::vector<std::vector<const Constraint*>> due(n);
  for (const auto& c : schema.constraints) {
    auto rels = constraint_relations(c);
    if (rels.size() < 2) continue;
    std::size_t last = 0;
    for (const auto& r : rels) {
      auto it = std::find_if(schema.relations.begin(), schema.relations.end(),
                             [&](const RelationSignature& s) { return s.name == r; });
      if (it == schema.relations.end()) throw Error(Errc::UnknownRelation, r);
      last = std::max(last, static_cast<std::size_t>(it - schema.relations.begin()));
    }
    due[last].push_back(&c);
  }

  Instance current = Instance::empty_for(schema);
  std::size_t visited = 0;
  bool stop = false;
  std::function<void(std::size_t, std::size_t)> assign = [&](std::size_t i, std::size_t remaining) {
    if (stop) return;
    if (i == n) {
      if (remaining != 0) return;
      ++visited;
      if (!visit(current)) stop = true;
      return;
    }
    const auto& name = schema.relations[i].name;
    const auto& by_size = choices[i].by_size;
    for (std::size_t s = 0; s < by_size.size() && s <= remaining && !stop; ++s) {
      for (const auto& rows : by_size[s]) {
        current[name] = rows;
        bool ok = std::all_of(due[i].begin(), due[i].end(),
                              [&](const Constraint* c) { return check_constraint(*c, current, schema); });
        if (ok) assign(i + 1, remaining - s);
        if (stop) break;
      }
    }
    current[name].clear();
  };
  for (std::size_t total = 0; total <= max_total && !stop; ++total) assign(0, total);
  return visited;
}

std::vector<Instance> legal_instances(const Schema& schema, const DomainSpec& domains, const EnumerationBounds& bounds) {
  std::vector<Instance> out;
  for_each_legal_instance(schema, domains, bounds, [&](const Instance& i) {
    out.push_back(i);
    return true;
  });
  return out;
}

}  // namespace lossless
