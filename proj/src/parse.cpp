#include "lossless/parse.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lossless/lexer.hpp"

namespace lossless {

namespace {

AttrList parse_attr_list(TokenCursor& cur) {
  AttrList out;
  out.relation = cur.expect_ident("relation name");
  if (cur.accept_symbol(".")) {
    out.attrs.push_back(cur.expect_ident("attribute"));
  } else {
    out.attrs = cur.parse_ident_list("(", ")");
  }
  return out;
}

std::pair<std::string, std::string> parse_qualified(TokenCursor& cur) {
  auto rel = cur.expect_ident("relation name");
  cur.expect_symbol(".");
  return {rel, cur.expect_ident("attribute")};
}

RelationSignature parse_relation(TokenCursor& cur) {
  RelationSignature r;
  r.name = cur.expect_ident("relation name");
  cur.expect_symbol("(");
  if (!cur.is_symbol(")")) {
    do {
      AttributeSpec a;
      a.name = cur.expect_ident("attribute");
      while (true) {
        if (cur.at_sort()) {
          a.sort = cur.parse_sort();
        } else if (cur.accept_keyword("nullable")) {
          a.nullable = true;
        } else if (cur.accept_keyword("domain")) {
          a.enum_domain = cur.parse_value_set();
        } else {
          break;
        }
      }
      r.attributes.push_back(std::move(a));
    } while (cur.accept_symbol(","));
  }
  cur.expect_symbol(")");
  return r;
}

}  // namespace

Schema parse_schema(std::string_view text) {
  TokenCursor cur(text);
  Schema s;
  while (cur.skip_separators()) {
    const auto head = cur.peek();
    if (cur.accept_keyword("relation")) {
      s.relations.push_back(parse_relation(cur));
    } else if (cur.accept_keyword("fd") || cur.accept_keyword("mvd")) {
      const bool mvd = head.text == "mvd" || head.text == "MVD";
      auto rel = cur.expect_ident("relation name");
      cur.expect_symbol(":");
      auto lhs = cur.parse_bare_ident_list();
      cur.expect_symbol(mvd ? "->>" : "->");
      auto rhs = cur.parse_bare_ident_list();
      if (mvd) {
        s.constraints.push_back(MultivaluedDep{rel, lhs, rhs});
      } else {
        s.constraints.push_back(FunctionalDep{rel, lhs, rhs});
      }
    } else if (cur.accept_keyword("key")) {
      auto rel = cur.expect_ident("relation name");
      auto lhs = cur.parse_ident_list("(", ")");
      const auto* sig = s.find(rel);
      if (!sig) cur.fail_at(head, "key on undeclared relation " + rel);
      std::vector<std::string> rhs;
      for (const auto& a : sig->attributes) {
        if (std::find(lhs.begin(), lhs.end(), a.name) == lhs.end()) rhs.push_back(a.name);
      }
      if (!rhs.empty()) s.constraints.push_back(FunctionalDep{rel, lhs, rhs});
    } else if (cur.accept_keyword("inclusion") || cur.accept_keyword("inclusion2")) {
      Inclusion inc;
      inc.from = parse_attr_list(cur);
      if (cur.accept_symbol("<=>")) {
        inc.bidirectional = true;
      } else {
        cur.expect_symbol("<=");
      }
      inc.to = parse_attr_list(cur);
      s.constraints.push_back(std::move(inc));
    } else if (cur.accept_keyword("domain_in") || cur.accept_keyword("domain_not_in")) {
      auto [rel, attr] = parse_qualified(cur);
      cur.expect_keyword("in");
      auto values = cur.parse_value_set();
      if (head.text.size() == std::string_view("domain_in").size()) {
        s.constraints.push_back(DomainIn{rel, attr, values});
      } else {
        s.constraints.push_back(DomainNotIn{rel, attr, values});
      }
    } else if (cur.accept_keyword("not_null")) {
      auto [rel, attr] = parse_qualified(cur);
      s.constraints.push_back(NotNull{rel, attr});
    } else if (cur.accept_keyword("assert_eq")) {
      auto l = cur.parse_expr();
      cur.expect_symbol("==");
      s.constraints.push_back(AlgebraicEq{l, cur.parse_expr()});
    } else if (cur.accept_keyword("assert_subset")) {
      auto l = cur.parse_expr();
      cur.expect_symbol("<=");
      s.constraints.push_back(AlgebraicSubset{l, cur.parse_expr()});
    } else if (cur.accept_keyword("assert_disjoint")) {
      auto l = cur.parse_expr();
      cur.expect_symbol(",");
      s.constraints.push_back(AlgebraicDisjoint{l, cur.parse_expr()});
    } else if (cur.accept_keyword("assert_empty")) {
      s.constraints.push_back(AlgebraicEmpty{cur.parse_expr()});
    } else {
      cur.fail("expected a declaration");
    }
    cur.end_statement();
  }
  return s;
}

Expr parse_expr(std::string_view text) {
  TokenCursor cur(text);
  cur.skip_separators();
  auto e = cur.parse_expr();
  cur.skip_separators();
  if (!cur.at_end()) cur.fail("trailing input after expression");
  return e;
}

Predicate parse_predicate(std::string_view text) {
  TokenCursor cur(text);
  cur.skip_separators();
  auto p = cur.parse_predicate();
  cur.skip_separators();
  if (!cur.at_end()) cur.fail("trailing input after predicate");
  return p;
}

Tuple parse_tuple(TokenCursor& cur, const RelationSignature& sig, const SourceToken& head) {
  cur.expect_symbol("(");
  Tuple t;
  if (!cur.is_symbol(")")) {
    do {
      const auto at = cur.peek();
      auto v = cur.parse_value();
      if (t.size() < sig.arity() && !v.fits(sig.attributes[t.size()].sort)) {
        cur.fail_at(at, "value " + v.str() + " does not fit " + sig.attributes[t.size()].sort.str());
      }
      t.push_back(std::move(v));
    } while (cur.accept_symbol(","));
  }
  cur.expect_symbol(")");
  if (t.size() != sig.arity()) {
    cur.fail_at(head, sig.name + " expects " + std::to_string(sig.arity()) + " values, got " + std::to_string(t.size()));
  }
  return t;
}

Instance parse_instance(std::string_view text, const Schema& schema) {
  TokenCursor cur(text);
  Instance inst = Instance::empty_for(schema);
  while (cur.skip_separators()) {
    const auto head = cur.peek();
    auto rel = cur.expect_ident("relation name");
    const auto* sig = schema.find(rel);
    if (!sig) cur.fail_at(head, "unknown relation " + rel);
    Tuple t = parse_tuple(cur, *sig, head);
    inst[rel].insert(std::move(t));
    cur.end_statement();
  }
  return inst;
}

Mapping parse_mapping(std::string_view text) {
  TokenCursor cur(text);
  Mapping m;
  while (cur.skip_separators()) {
    auto rel = cur.expect_ident("relation name");
    cur.expect_symbol("=");
    m.views.push_back({rel, cur.parse_expr()});
    cur.end_statement();
  }
  return m;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidSchema, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace lossless
