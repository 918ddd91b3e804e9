#include <algorithm>
#include <sstream>

#include "lossless/error.hpp"
#include "lossless/lexer.hpp"
#include "lossless/print.hpp"
#include "lossless/rewrite.hpp"
#include "pattern_util.hpp"

namespace lossless {

using namespace detail;

CompiledTransform identity_transform(const Schema& schema) {
  CompiledTransform t;
  t.source = schema;
  t.target = schema;
  t.fwd = Mapping::identity(schema);
  t.bwd = Mapping::identity(schema);
  return t;
}

CompiledTransform apply_rename(const Schema& s, const RenameAttr& st) {
  const auto& rel = require_relation(s, st.relation);
  require_attrs(rel, {st.from});
  if (rel.find(st.to)) throw Error(Errc::NameClash, rel.name + " already has an attribute " + st.to);
  auto rn = [&](Names xs) {
    std::replace(xs.begin(), xs.end(), st.from, st.to);
    return xs;
  };
  CompiledTransform t;
  t.source = s;
  t.provenance = {st};
  t.target.relations = s.relations;
  for (auto& r : t.target.relations) {
    if (r.name != rel.name) continue;
    for (auto& a : r.attributes) {
      if (a.name == st.from) a.name = st.to;
    }
  }
  Mapping fwd, bwd;
  fwd.views.push_back({rel.name, Expr::rename({{st.from, st.to, std::nullopt}}, Expr::relation(rel.name))});
  add_identity_views(fwd, t.target, {rel.name});
  const Expr back = Expr::rename({{st.to, st.from, std::nullopt}}, Expr::relation(rel.name));
  bwd.views.push_back({rel.name, back});
  add_identity_views(bwd, s, {rel.name});
  t.fwd = ordered(fwd, t.target);
  t.bwd = ordered(bwd, s);
  const Mapping changed{{{rel.name, back}}};
  for (const auto& c : s.constraints) {
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, FunctionalDep> || std::is_same_v<T, MultivaluedDep>) {
            if (k.relation == rel.name) {
              push_unique(t.target.constraints, T{k.relation, rn(k.lhs), rn(k.rhs)});
            } else {
              push_unique(t.target.constraints, k);
            }
          } else if constexpr (std::is_same_v<T, Inclusion>) {
            auto fix = [&](AttrList a) {
              if (a.relation == rel.name) a.attrs = rn(a.attrs);
              return a;
            };
            push_unique(t.target.constraints, Inclusion{fix(k.from), fix(k.to), k.bidirectional});
          } else if constexpr (std::is_same_v<T, DomainIn> || std::is_same_v<T, DomainNotIn> ||
                               std::is_same_v<T, NotNull>) {
            T img = k;
            if (img.relation == rel.name && img.attr == st.from) img.attr = st.to;
            push_unique(t.target.constraints, img);
          } else {
            push_unique(t.target.constraints, substitute(Constraint{k}, changed));
          }
        },
        c);
  }
  return t;
}

CompiledTransform apply_step(const Schema& schema, const TransformStep& step) {
  return std::visit(
      [&](const auto& st) -> CompiledTransform {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, VerticalDecomposition>) return apply_vertical(schema, st);
        if constexpr (std::is_same_v<T, HorizontalDecomposition>) return apply_horizontal(schema, st);
        if constexpr (std::is_same_v<T, NullElimination>) return apply_null_elimination(schema, st);
        if constexpr (std::is_same_v<T, OidIntroduction>) return apply_oid_introduction(schema, st);
        if constexpr (std::is_same_v<T, RenameAttr>) return apply_rename(schema, st);
      },
      step);
}

CompiledTransform compose_plan(const Schema& source, const std::vector<TransformStep>& steps) {
  CompiledTransform total = identity_transform(source);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    CompiledTransform t;
    try {
      t = apply_step(total.target, steps[i]);
    } catch (const Error& e) {
      throw Error(e.code(), "step " + std::to_string(i + 1) + " (" + to_string(steps[i]) + "): " + e.message());
    }
    total.fwd = normalize(unfold_mapping(t.fwd, total.fwd), source);
    total.bwd = normalize(unfold_mapping(total.bwd, t.bwd), t.target);
    total.target = std::move(t.target);
    total.provenance.push_back(steps[i]);
  }
  return total;
}

Classification classify_tables(const Schema& schema) {
  std::set<std::string> rel, ent;
  for (const auto& c : schema.constraints) {
    const auto* inc = std::get_if<Inclusion>(&c);
    if (inc && !inc->bidirectional) rel.insert(inc->from.relation);
  }
  for (const auto& c : schema.constraints) {
    const auto* inc = std::get_if<Inclusion>(&c);
    if (inc && !inc->bidirectional && rel.count(inc->from.relation)) ent.insert(inc->to.relation);
  }
  Classification out;
  for (const auto& r : schema.relations) {
    const bool is_rel = rel.count(r.name) > 0, is_ent = ent.count(r.name) > 0;
    if (is_rel == is_ent) {
      out.undecided.push_back(r.name);
    } else if (is_rel) {
      out.relationships.push_back(r.name);
    } else {
      out.entities.push_back(r.name);
    }
  }
  return out;
}

namespace {

std::string join_names(const Names& xs, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

Names paren_list(TokenCursor& cur) { return cur.parse_ident_list("(", ")"); }

OidEntity parse_entity(TokenCursor& cur) {
  OidEntity e;
  e.name = cur.expect_ident("entity name");
  cur.expect_keyword("key");
  e.key = paren_list(cur);
  cur.expect_keyword("tag");
  e.tag = cur.expect_ident("OID tag");
  if (cur.accept_keyword("as")) e.oid_attr = cur.expect_ident("OID attribute");
  if (cur.accept_keyword("anchor")) {
    cur.expect_keyword("from");
    e.source = cur.expect_ident("source table");
    cur.expect_keyword("ident");
    e.ident = cur.expect_ident("identification table");
  }
  return e;
}

}  // namespace

std::vector<TransformStep> parse_plan(std::string_view text) {
  TokenCursor cur(text);
  std::vector<TransformStep> steps;
  bool last_was_oid = false;
  while (cur.skip_separators()) {
    if (cur.accept_keyword("vertical")) {
      VerticalDecomposition v;
      v.relation = cur.expect_ident("relation name");
      cur.expect_symbol("->");
      v.left_name = cur.expect_ident("relation name");
      v.left = paren_list(cur);
      v.right_name = cur.expect_ident("relation name");
      v.right = paren_list(cur);
      cur.expect_keyword("on");
      v.shared = paren_list(cur);
      steps.push_back(v);
      last_was_oid = false;
    } else if (cur.accept_keyword("horizontal")) {
      HorizontalDecomposition h;
      h.relation = cur.expect_ident("relation name");
      cur.expect_symbol("->");
      h.first_name = cur.expect_ident("relation name");
      h.second_name = cur.expect_ident("relation name");
      cur.expect_keyword("where");
      h.condition = cur.parse_predicate();
      steps.push_back(h);
      last_was_oid = false;
    } else if (cur.accept_keyword("null_elim")) {
      NullElimination n;
      n.relation = cur.expect_ident("relation name");
      cur.expect_symbol(".");
      n.attrs = cur.parse_bare_ident_list();
      cur.expect_symbol("->");
      if (!cur.accept_symbol("-")) n.without_name = cur.expect_ident("relation name");
      n.with_name = cur.expect_ident("relation name");
      steps.push_back(n);
      last_was_oid = false;
    } else if (cur.accept_keyword("rename")) {
      RenameAttr r;
      r.relation = cur.expect_ident("relation name");
      cur.expect_symbol(".");
      r.from = cur.expect_ident("attribute");
      cur.expect_symbol("->");
      r.to = cur.expect_ident("attribute");
      steps.push_back(r);
      last_was_oid = false;
    } else if (cur.accept_keyword("oid")) {
      if (!last_was_oid) steps.push_back(OidIntroduction{});
      auto& step = std::get<OidIntroduction>(steps.back());
      if (cur.accept_keyword("entity")) {
        step.entities.push_back(parse_entity(cur));
      } else if (cur.accept_keyword("subtype")) {
        OidSubtype s;
        s.name = cur.expect_ident("subtype name");
        cur.expect_keyword("of");
        s.supertype = cur.expect_ident("supertype name");
        cur.expect_keyword("from");
        s.source = cur.expect_ident("source table");
        step.subtypes.push_back(s);
      } else if (cur.accept_keyword("relationship")) {
        OidRelationship r;
        r.relation = cur.expect_ident("relation name");
        while (cur.accept_keyword("fk")) {
          cur.expect_symbol("(");
          ForeignKey fk;
          fk.attr = cur.expect_ident("attribute");
          cur.expect_symbol("->");
          fk.entity = cur.expect_ident("entity name");
          cur.expect_symbol(")");
          r.fks.push_back(fk);
        }
        if (r.fks.empty()) cur.fail("expected fk(attr -> Entity)");
        step.relationships.push_back(r);
      } else {
        cur.fail("expected entity, subtype or relationship");
      }
      last_was_oid = true;
    } else {
      cur.fail("expected a plan step");
    }
    cur.end_statement();
  }
  return steps;
}

std::string to_string(const TransformStep& step) {
  return std::visit(
      [](const auto& st) -> std::string {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, VerticalDecomposition>) {
          return "vertical " + st.relation + " -> " + st.left_name + "(" + join_names(st.left) + ") " + st.right_name +
                 "(" + join_names(st.right) + ") on (" + join_names(st.shared) + ")";
        } else if constexpr (std::is_same_v<T, HorizontalDecomposition>) {
          return "horizontal " + st.relation + " -> " + st.first_name + " " + st.second_name + " where " +
                 to_string(st.condition);
        } else if constexpr (std::is_same_v<T, NullElimination>) {
          return "null_elim " + st.relation + "." + join_names(st.attrs) + " -> " + st.without_name.value_or("-") + " " +
                 st.with_name;
        } else if constexpr (std::is_same_v<T, RenameAttr>) {
          return "rename " + st.relation + "." + st.from + " -> " + st.to;
        } else {
          std::string out;
          for (const auto& e : st.entities) {
            if (!out.empty()) out += "\n";
            out += "oid entity " + e.name + " key(" + join_names(e.key) + ") tag " + e.tag;
            if (!e.oid_attr.empty()) out += " as " + e.oid_attr;
            if (e.source) out += " anchor from " + *e.source + " ident " + e.ident;
          }
          for (const auto& s : st.subtypes) {
            if (!out.empty()) out += "\n";
            out += "oid subtype " + s.name + " of " + s.supertype + " from " + s.source;
          }
          for (const auto& r : st.relationships) {
            if (!out.empty()) out += "\n";
            out += "oid relationship " + r.relation;
            for (const auto& fk : r.fks) out += " fk(" + fk.attr + " -> " + fk.entity + ")";
          }
          return out;
        }
      },
      step);
}

std::string print_transform(const CompiledTransform& t) {
  std::ostringstream out;
  out << "# target schema\n" << print_schema(t.target);
  out << "\n# forward views (target over source)\n" << print_mapping(t.fwd);
  out << "\n# backward views (source over target)\n" << print_mapping(t.bwd);
  return out.str();
}

}  // namespace lossless
