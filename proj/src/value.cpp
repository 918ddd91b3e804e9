#include "lossless/value.hpp"

#include <cctype>

namespace lossless {

namespace {

bool is_bare_word(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return s != "NULL";
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string token_to_string(const Token& token) {
  if (const auto* i = std::get_if<std::int64_t>(&token)) return std::to_string(*i);
  return quote(std::get<std::string>(token));
}

std::string Sort::str() const { return is_oid() ? "OID(" + tag + ")" : "VALUE"; }

Value Value::cast_to(const Sort& target) const {
  if (is_null()) return *this;
  if (target.is_oid()) {
    if (is_const()) return oid(target.tag, as_const().token);
    return oid(target.tag, as_oid().payload);
  }
  if (is_oid()) return constant(as_oid().payload);
  return *this;
}

bool Value::fits(const Sort& s) const {
  if (is_null()) return true;
  if (s.is_oid()) return is_oid() && as_oid().tag == s.tag;
  return is_const();
}

std::string Value::str() const {
  if (is_null()) return "NULL";
  if (is_const()) return token_to_string(as_const().token);
  const auto& o = as_oid();
  if (const auto* s = std::get_if<std::string>(&o.payload); s && is_bare_word(*s)) return o.tag + ":" + *s;
  return o.tag + ":" + token_to_string(o.payload);
}

std::string tuple_to_string(const Tuple& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ", ";
    out += t[i].str();
  }
  return out + ")";
}

}  // namespace lossless
