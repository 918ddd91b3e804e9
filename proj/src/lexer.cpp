#include "lossless/lexer.hpp"

#include <algorithm>
#include <cctype>

namespace lossless {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::vector<SourceToken> tokenize(std::string_view text) {
  std::vector<SourceToken> out;
  int line = 1, col = 1, depth = 0;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto push = [&](SourceToken::Kind kind, std::string s, int l, int c) { out.push_back({kind, std::move(s), l, c}); };

  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      if (depth == 0) push(SourceToken::Kind::Symbol, ";", line, col);
      advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '-' && i + 1 < text.size() && text[i + 1] == '-')) {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    const int l = line, cc = col;
    if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < text.size() &&
             (ident_char(text[j]) || (text[j] == '-' && j + 1 < text.size() && ident_char(text[j + 1])))) {
        ++j;
      }
      push(SourceToken::Kind::Ident, std::string(text.substr(i, j - i)), l, cc);
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i + 1;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      push(SourceToken::Kind::Integer, std::string(text.substr(i, j - i)), l, cc);
      advance(j - i);
      continue;
    }
    if (c == '"') {
      std::string s;
      std::size_t j = i + 1;
      bool closed = false;
      while (j < text.size()) {
        if (text[j] == '\\' && j + 1 < text.size()) {
          s += text[j + 1];
          j += 2;
        } else if (text[j] == '"') {
          closed = true;
          ++j;
          break;
        } else if (text[j] == '\n') {
          break;
        } else {
          s += text[j++];
        }
      }
      if (!closed) throw ParseError(l, cc, "unterminated string literal");
      push(SourceToken::Kind::String, std::move(s), l, cc);
      advance(j - i);
      continue;
    }
    static constexpr std::string_view kMulti[] = {"<=>", "->>", "->", "<=", "==", "!=", ">="};
    bool matched = false;
    for (auto sym : kMulti) {
      if (text.substr(i, sym.size()) == sym) {
        push(SourceToken::Kind::Symbol, std::string(sym), l, cc);
        advance(sym.size());
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("()[]{},:;.=-*<>/").find(c) != std::string_view::npos) {
      if (c == '(' || c == '[' || c == '{') ++depth;
      if ((c == ')' || c == ']' || c == '}') && depth > 0) --depth;
      push(SourceToken::Kind::Symbol, std::string(1, c), l, cc);
      advance(1);
      continue;
    }
    throw ParseError(l, cc, std::string("unexpected character '") + c + "'");
  }
  push(SourceToken::Kind::End, "", line, col);
  return out;
}

const SourceToken& TokenCursor::peek(std::size_t ahead) const {
  return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
}

SourceToken TokenCursor::next() {
  SourceToken t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool TokenCursor::is_symbol(std::string_view s, std::size_t ahead) const {
  const auto& t = peek(ahead);
  return t.kind == SourceToken::Kind::Symbol && t.text == s;
}

bool TokenCursor::is_keyword(std::string_view kw, std::size_t ahead) const {
  const auto& t = peek(ahead);
  return t.kind == SourceToken::Kind::Ident && lower(t.text) == kw;
}

bool TokenCursor::accept_symbol(std::string_view s) {
  if (!is_symbol(s)) return false;
  next();
  return true;
}

bool TokenCursor::accept_keyword(std::string_view kw) {
  if (!is_keyword(kw)) return false;
  next();
  return true;
}

void TokenCursor::expect_symbol(std::string_view s) {
  if (!accept_symbol(s)) fail("expected '" + std::string(s) + "'");
}

void TokenCursor::expect_keyword(std::string_view kw) {
  if (!accept_keyword(kw)) fail("expected '" + std::string(kw) + "'");
}

std::string TokenCursor::expect_ident(std::string_view what) {
  if (peek().kind != SourceToken::Kind::Ident) fail("expected " + std::string(what));
  return next().text;
}

bool TokenCursor::skip_separators() {
  while (accept_symbol(";")) {
  }
  return !at_end();
}

void TokenCursor::end_statement() {
  if (at_end()) return;
  if (!accept_symbol(";")) fail("expected end of statement");
}

void TokenCursor::fail(const std::string& message) const { fail_at(peek(), message); }

void TokenCursor::fail_at(const SourceToken& t, const std::string& message) const {
  std::string found = t.kind == SourceToken::Kind::End ? "end of input" : "'" + t.text + "'";
  throw ParseError(t.line, t.column, message + ", found " + found);
}

Value TokenCursor::parse_value() {
  const auto& t = peek();
  switch (t.kind) {
    case SourceToken::Kind::Integer: return Value::integer(std::stoll(next().text));
    case SourceToken::Kind::String: return Value::string(next().text);
    case SourceToken::Kind::Ident: {
      if (is_keyword("null")) {
        next();
        return Value::null();
      }
      if (is_symbol(":", 1)) {
        std::string tag = next().text;
        next();
        const auto& p = peek();
        if (p.kind == SourceToken::Kind::Integer) return Value::oid(tag, std::stoll(next().text));
        if (p.kind == SourceToken::Kind::String || p.kind == SourceToken::Kind::Ident) return Value::oid(tag, next().text);
        fail("expected OID payload");
      }
      break;
    }
    default: break;
  }
  fail("expected a value literal");
}

std::vector<Value> TokenCursor::parse_value_set() {
  expect_symbol("{");
  std::vector<Value> out;
  if (!is_symbol("}")) {
    do {
      out.push_back(parse_value());
    } while (accept_symbol(","));
  }
  expect_symbol("}");
  return out;
}

bool TokenCursor::at_sort() const { return is_keyword("value") || is_keyword("oid"); }

Sort TokenCursor::parse_sort() {
  if (accept_keyword("value")) return Sort::value();
  if (accept_keyword("oid")) {
    expect_symbol("(");
    auto tag = expect_ident("OID tag");
    expect_symbol(")");
    return Sort::oid(tag);
  }
  fail("expected VALUE or OID(tag)");
}

Predicate TokenCursor::parse_predicate() {
  std::vector<Predicate> terms{parse_predicate_term()};
  while (accept_keyword("and")) terms.push_back(parse_predicate_term());
  return terms.size() == 1 ? terms.front() : Predicate::conjunction(std::move(terms));
}

Predicate TokenCursor::parse_predicate_term() {
  if (accept_keyword("true")) return Predicate::always();
  if (accept_keyword("false")) return Predicate::never();
  if (accept_symbol("(")) {
    auto p = parse_predicate();
    expect_symbol(")");
    return p;
  }
  auto attr = expect_ident("attribute");
  if (accept_keyword("is")) {
    bool negated = accept_keyword("not");
    expect_keyword("null");
    return negated ? Predicate::is_not_null(attr) : Predicate::is_null(attr);
  }
  // Terse form: "depname NOT NULL".
  if (accept_keyword("not")) {
    expect_keyword("null");
    return Predicate::is_not_null(attr);
  }
  if (accept_symbol("=")) {
    if (peek().kind == SourceToken::Kind::Ident && !is_keyword("null") && !is_symbol(":", 1)) {
      return Predicate::eq_attr(attr, next().text);
    }
    return Predicate::eq_const(attr, parse_value());
  }
  if (accept_symbol("!=")) return Predicate::ne_const(attr, parse_value());
  fail("expected comparison");
}

std::vector<std::string> TokenCursor::parse_ident_list(std::string_view open, std::string_view close) {
  expect_symbol(open);
  std::vector<std::string> out;
  if (!is_symbol(close)) {
    do {
      out.push_back(expect_ident("attribute"));
    } while (accept_symbol(","));
  }
  expect_symbol(close);
  return out;
}

std::vector<std::string> TokenCursor::parse_bare_ident_list() {
  std::vector<std::string> out{expect_ident("attribute")};
  while (is_symbol(",") && peek(1).kind == SourceToken::Kind::Ident) {
    next();
    out.push_back(next().text);
  }
  return out;
}

Expr TokenCursor::parse_expr() {
  const auto head = peek();
  if (head.kind != SourceToken::Kind::Ident) fail("expected expression");
  const std::string kw = lower(head.text);
  const bool bracketed = is_symbol("[", 1);
  const bool called = is_symbol("(", 1);

  if (bracketed && (kw == "pi" || kw == "project")) {
    next();
    auto attrs = parse_ident_list("[", "]");
    expect_symbol("(");
    auto in = parse_expr();
    expect_symbol(")");
    return Expr::project(std::move(attrs), std::move(in));
  }
  if (bracketed && (kw == "sigma" || kw == "select")) {
    next();
    expect_symbol("[");
    auto pred = parse_predicate();
    expect_symbol("]");
    expect_symbol("(");
    auto in = parse_expr();
    expect_symbol(")");
    return Expr::select(std::move(pred), std::move(in));
  }
  if (bracketed && (kw == "rho" || kw == "rename")) {
    next();
    expect_symbol("[");
    std::vector<RenameItem> items;
    do {
      RenameItem item;
      item.from = expect_ident("attribute");
      if (!accept_symbol("->")) expect_symbol("/");
      item.to = expect_ident("attribute");
      if (accept_symbol(":")) item.cast = parse_sort();
      items.push_back(std::move(item));
    } while (accept_symbol(","));
    expect_symbol("]");
    expect_symbol("(");
    auto in = parse_expr();
    expect_symbol(")");
    return Expr::rename(std::move(items), std::move(in));
  }
  if (bracketed && kw == "pad") {
    next();
    expect_symbol("[");
    std::vector<PadItem> items;
    do {
      PadItem item{expect_ident("attribute"), Sort::value()};
      if (accept_symbol(":")) item.sort = parse_sort();
      items.push_back(std::move(item));
    } while (accept_symbol(","));
    expect_symbol("]");
    expect_symbol("(");
    auto in = parse_expr();
    expect_symbol(")");
    return Expr::pad(std::move(items), std::move(in));
  }
  if (called && (kw == "product" || kw == "join" || kw == "outerjoin" || kw == "union" || kw == "intersect" ||
                 kw == "diff")) {
    next();
    expect_symbol("(");
    std::vector<Expr> args{parse_expr()};
    while (accept_symbol(",")) args.push_back(parse_expr());
    expect_symbol(")");
    if (kw == "outerjoin") return Expr::outer_join(std::move(args));
    if (args.size() != 2) fail_at(head, kw + " takes two operands");
    if (kw == "product") return Expr::product(args[0], args[1]);
    if (kw == "join") return Expr::join(args[0], args[1]);
    if (kw == "union") return Expr::set_union(args[0], args[1]);
    if (kw == "intersect") return Expr::intersect(args[0], args[1]);
    return Expr::difference(args[0], args[1]);
  }
  if (called || bracketed) fail_at(head, "unknown operator '" + head.text + "'");
  return Expr::relation(next().text);
}

}  // namespace lossless
