#include "lossless/print.hpp"

#include <sstream>

namespace lossless {

namespace {

std::string join(const std::vector<std::string>& xs, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

std::string attr_list(const AttrList& a) {
  if (a.attrs.size() == 1) return a.relation + "." + a.attrs[0];
  return a.relation + "(" + join(a.attrs) + ")";
}

std::string value_set(const std::vector<Value>& vs) {
  std::vector<std::string> parts;
  for (const auto& v : vs) parts.push_back(v.str());
  return "{" + join(parts) + "}";
}

}  // namespace

std::string to_string(const Predicate& p) {
  using K = Predicate::Kind;
  switch (p.kind) {
    case K::True: return "true";
    case K::False: return "false";
    case K::EqAttr: return p.attr + " = " + p.other_attr;
    case K::EqConst: return p.attr + " = " + p.constant.str();
    case K::NeConst: return p.attr + " != " + p.constant.str();
    case K::IsNull: return p.attr + " is null";
    case K::IsNotNull: return p.attr + " is not null";
    case K::And: {
      std::vector<std::string> parts;
      for (const auto& t : p.terms) parts.push_back(to_string(t));
      return join(parts, " and ");
    }
  }
  return "?";
}

std::string to_string(const Expr& e) {
  using K = Expr::Kind;
  auto binary = [&](const char* op) { return std::string(op) + "(" + to_string(e.child(0)) + ", " + to_string(e.child(1)) + ")"; };
  switch (e.kind()) {
    case K::RelationRef: return e.relation_name();
    case K::Project: return "pi[" + join(e.attrs()) + "](" + to_string(e.child()) + ")";
    case K::Select: return "sigma[" + to_string(e.predicate()) + "](" + to_string(e.child()) + ")";
    case K::Rename: {
      std::vector<std::string> parts;
      for (const auto& r : e.renames()) parts.push_back(r.from + "->" + r.to + (r.cast ? ":" + r.cast->str() : ""));
      return "rho[" + join(parts) + "](" + to_string(e.child()) + ")";
    }
    case K::Pad: {
      std::vector<std::string> parts;
      for (const auto& p : e.pads()) parts.push_back(p.name + (p.sort.is_oid() ? ":" + p.sort.str() : ""));
      return "pad[" + join(parts) + "](" + to_string(e.child()) + ")";
    }
    case K::Product: return binary("product");
    case K::NaturalJoin: return binary("join");
    case K::Union: return binary("union");
    case K::Intersect: return binary("intersect");
    case K::Difference: return binary("diff");
    case K::OuterJoin: {
      std::vector<std::string> parts;
      for (const auto& c : e.children()) parts.push_back(to_string(c));
      return "outerjoin(" + join(parts) + ")";
    }
  }
  return "?";
}

std::string to_string(const Constraint& c) {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, FunctionalDep>) {
          return "fd " + k.relation + ": " + join(k.lhs) + " -> " + join(k.rhs);
        } else if constexpr (std::is_same_v<T, MultivaluedDep>) {
          return "mvd " + k.relation + ": " + join(k.lhs) + " ->> " + join(k.rhs);
        } else if constexpr (std::is_same_v<T, Inclusion>) {
          if (k.bidirectional) return "inclusion2 " + attr_list(k.from) + " <=> " + attr_list(k.to);
          return "inclusion " + attr_list(k.from) + " <= " + attr_list(k.to);
        } else if constexpr (std::is_same_v<T, DomainIn>) {
          return "domain_in " + k.relation + "." + k.attr + " in " + value_set(k.values);
        } else if constexpr (std::is_same_v<T, DomainNotIn>) {
          return "domain_not_in " + k.relation + "." + k.attr + " in " + value_set(k.values);
        } else if constexpr (std::is_same_v<T, NotNull>) {
          return "not_null " + k.relation + "." + k.attr;
        } else if constexpr (std::is_same_v<T, AlgebraicEq>) {
          return "assert_eq " + to_string(k.lhs) + " == " + to_string(k.rhs);
        } else if constexpr (std::is_same_v<T, AlgebraicSubset>) {
          return "assert_subset " + to_string(k.lhs) + " <= " + to_string(k.rhs);
        } else if constexpr (std::is_same_v<T, AlgebraicDisjoint>) {
          return "assert_disjoint " + to_string(k.lhs) + ", " + to_string(k.rhs);
        } else {
          return "assert_empty " + to_string(k.expr);
        }
      },
      c);
}

std::string to_string(const RelationSignature& r) {
  std::vector<std::string> attrs;
  for (const auto& a : r.attributes) {
    std::string s = a.sort.is_oid() ? a.name + " " + a.sort.str() : a.name;
    if (a.nullable) s += " NULLABLE";
    if (a.enum_domain) s += " domain " + value_set(*a.enum_domain);
    attrs.push_back(std::move(s));
  }
  return "relation " + r.name + "(" + join(attrs) + ")";
}

std::string print_schema(const Schema& s) {
  std::ostringstream out;
  for (const auto& r : s.relations) out << to_string(r) << ";\n";
  for (const auto& c : s.constraints) out << to_string(c) << ";\n";
  return out.str();
}

std::string print_mapping(const Mapping& m) {
  std::ostringstream out;
  for (const auto& v : m.views) out << v.relation << " = " << to_string(v.expr) << ";\n";
  return out.str();
}

std::string print_instance(const Instance& instance, const Schema& schema) {
  std::ostringstream out;
  for (const auto& r : schema.relations) {
    for (const auto& t : instance.at(r.name)) out << r.name << tuple_to_string(t) << "\n";
  }
  return out.str();
}

}  // namespace lossless
