#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lossless/algebra.hpp"
#include "lossless/error.hpp"
#include "lossless/value.hpp"

namespace lossless {

struct SourceToken {
  enum class Kind { Ident, Integer, String, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
  int column = 1;
};

/// Tokenizer shared by every text format. A newline outside brackets ends a
/// statement and is reported as the symbol ";". `#` and `--` start comments.
std::vector<SourceToken> tokenize(std::string_view text);

/// Recursive-descent cursor with the expression/value grammar that all
/// formats share.
class TokenCursor {
 public:
  explicit TokenCursor(std::string_view text) : tokens_(tokenize(text)) {}

  const SourceToken& peek(std::size_t ahead = 0) const;
  SourceToken next();
  bool at_end() const { return peek().kind == SourceToken::Kind::End; }

  bool is_symbol(std::string_view s, std::size_t ahead = 0) const;
  /// Case-insensitive keyword match on an identifier token.
  bool is_keyword(std::string_view kw, std::size_t ahead = 0) const;
  bool accept_symbol(std::string_view s);
  bool accept_keyword(std::string_view kw);
  void expect_symbol(std::string_view s);
  void expect_keyword(std::string_view kw);
  std::string expect_ident(std::string_view what = "identifier");

  /// Skips statement separators; returns false at end of input.
  bool skip_separators();
  /// Requires ';' (or end of input) after a statement.
  void end_statement();

  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(const SourceToken& t, const std::string& message) const;

  Value parse_value();
  std::vector<Value> parse_value_set();  // { v, v, ... }
  Sort parse_sort();
  bool at_sort() const;
  Predicate parse_predicate();
  Expr parse_expr();
  std::vector<std::string> parse_ident_list(std::string_view open, std::string_view close);
  /// Comma-separated identifiers without brackets (stops before a non-ident).
  std::vector<std::string> parse_bare_ident_list();

 private:
  Predicate parse_predicate_term();

  std::vector<SourceToken> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace lossless
