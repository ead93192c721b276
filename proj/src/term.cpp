#include "yp/term.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "yp/error.hpp"

namespace yp {

ParseError::ParseError(std::string message, std::size_t line, std::size_t column)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
            message),
      detail_(std::move(message)),
      line_(line),
      column_(column) {}

namespace {

bool isDigit(char c) { return c >= '0' && c <= '9'; }
bool isAlpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

bool validLangTag(std::string_view tag) {
  if (tag.empty()) return false;
  bool first = true;
  std::size_t run = 0;
  for (char c : tag) {
    if (c == '-') {
      if (run == 0) return false;
      run = 0;
      first = false;
      continue;
    }
    if (first ? !isAlpha(c) : !(isAlpha(c) || isDigit(c))) return false;
    ++run;
  }
  return run > 0;
}

bool validBlankLabel(std::string_view label) {
  if (label.empty()) return false;
  for (char c : label) {
    if (!(isAlpha(c) || isDigit(c) || c == '_' || c == '-' || c == '.')) return false;
  }
  return label.back() != '.';
}

// [+-]? digits* ('.' digits+)?  with at least one digit overall.
bool validDecimalLexical(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t intDigits = 0;
  while (i < s.size() && isDigit(s[i])) ++i, ++intDigits;
  std::size_t fracDigits = 0;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && isDigit(s[i])) ++i, ++fracDigits;
    if (fracDigits == 0) return false;
  }
  return i == s.size() && intDigits + fracDigits > 0;
}

std::string lowerAscii(std::string s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

int kindRank(TermKind k) {
  switch (k) {
    case TermKind::Blank: return 0;
    case TermKind::Iri: return 1;
    case TermKind::Literal: return 2;
  }
  return 3;
}

}  // namespace

bool isValidIri(std::string_view iri) {
  if (iri.empty()) return false;
  auto colon = iri.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  if (!isAlpha(iri[0])) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    char c = iri[i];
    if (!(isAlpha(c) || isDigit(c) || c == '+' || c == '-' || c == '.')) return false;
  }
  for (unsigned char c : iri) {
    if (c <= 0x20) return false;
    switch (c) {
      case '<': case '>': case '"': case '{': case '}': case '|': case '^': case '`':
      case '\\':
        return false;
      default:
        break;
    }
  }
  return true;
}

std::string formatDecimal(double value) {
  if (!std::isfinite(value)) throw ValidationError("non-finite decimal value");
  std::array<char, 512> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::fixed);
  if (ec != std::errc{}) throw ValidationError("decimal value out of range");
  std::string out(buf.data(), end);
  if (out == "-0") out = "0";
  return out;
}

Term Term::iri(std::string value) {
  if (!isValidIri(value)) throw ValidationError("invalid IRI <" + value + ">");
  Term t;
  t.kind_ = TermKind::Iri;
  t.value_ = std::move(value);
  return t;
}

Term Term::blank(std::string label) {
  if (!validBlankLabel(label)) throw ValidationError("invalid blank node label '" + label + "'");
  Term t;
  t.kind_ = TermKind::Blank;
  t.value_ = std::move(label);
  return t;
}

Term Term::string(std::string lexical, std::string lang) {
  if (!lang.empty() && !validLangTag(lang)) {
    throw ValidationError("invalid language tag '" + lang + "'");
  }
  Term t;
  t.kind_ = TermKind::Literal;
  t.datatype_ = Datatype::String;
  t.value_ = std::move(lexical);
  t.lang_ = lowerAscii(std::move(lang));
  return t;
}

Term Term::integer(std::int64_t value) {
  Term t;
  t.kind_ = TermKind::Literal;
  t.datatype_ = Datatype::Integer;
  t.value_ = std::to_string(value);
  t.integer_ = value;
  t.decimal_ = static_cast<double>(value);
  return t;
}

Term Term::integer(std::string_view lexical) {
  std::string_view digits = lexical;
  if (!digits.empty() && digits[0] == '+') digits.remove_prefix(1);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() ||
      (digits[0] == '-' && lexical[0] == '+')) {
    throw ValidationError("invalid integer literal '" + std::string(lexical) + "'");
  }
  return integer(v);
}

Term Term::decimal(std::string_view lexical) {
  if (!validDecimalLexical(lexical)) {
    throw ValidationError("invalid decimal literal '" + std::string(lexical) + "'");
  }
  std::string_view body = lexical;
  if (!body.empty() && body[0] == '+') body.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
  if (ec != std::errc{} || ptr != body.data() + body.size() || !std::isfinite(v)) {
    throw ValidationError("decimal literal out of range '" + std::string(lexical) + "'");
  }
  Term t;
  t.kind_ = TermKind::Literal;
  t.datatype_ = Datatype::Decimal;
  t.value_ = std::string(lexical);
  t.decimal_ = v;
  return t;
}

Term Term::decimal(double value) { return decimal(formatDecimal(value)); }

Term Term::literal(std::string lexical, std::string_view datatypeIri, std::string lang) {
  if (datatypeIri.empty() || datatypeIri == vocab::kXsdString) {
    return string(std::move(lexical), std::move(lang));
  }
  if (!lang.empty()) {
    throw ValidationError("a literal cannot carry both a language tag and a datatype");
  }
  if (datatypeIri == vocab::kXsdInteger) return integer(lexical);
  if (datatypeIri == vocab::kXsdDecimal) return decimal(lexical);
  throw ValidationError("unsupported datatype <" + std::string(datatypeIri) + ">");
}

std::string_view Term::datatypeIri() const {
  if (!isLiteral()) return {};
  switch (datatype_) {
    case Datatype::String: return vocab::kXsdString;
    case Datatype::Integer: return vocab::kXsdInteger;
    case Datatype::Decimal: return vocab::kXsdDecimal;
  }
  return {};
}

double Term::numericValue() const {
  return datatype_ == Datatype::Integer ? static_cast<double>(integer_) : decimal_;
}

std::string Term::toString() const {
  switch (kind_) {
    case TermKind::Iri: return "<" + value_ + ">";
    case TermKind::Blank: return "_:" + value_;
    case TermKind::Literal: break;
  }
  std::string out = "\"";
  for (char c : value_) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  if (!lang_.empty()) {
    out += "@" + lang_;
  } else if (datatype_ != Datatype::String) {
    out += "^^<" + std::string(datatypeIri()) + ">";
  }
  return out;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (auto c = kindRank(a.kind_) <=> kindRank(b.kind_); c != 0) return c;
  if (a.kind_ != TermKind::Literal) return a.value_ <=> b.value_;

  bool an = a.datatype_ != Datatype::String;
  bool bn = b.datatype_ != Datatype::String;
  if (an != bn) return an ? std::strong_ordering::less : std::strong_ordering::greater;
  if (an) {
    if (a.datatype_ == Datatype::Integer && b.datatype_ == Datatype::Integer) {
      if (auto c = a.integer_ <=> b.integer_; c != 0) return c;
    } else {
      long double x = a.datatype_ == Datatype::Integer ? static_cast<long double>(a.integer_)
                                                        : static_cast<long double>(a.decimal_);
      long double y = b.datatype_ == Datatype::Integer ? static_cast<long double>(b.integer_)
                                                        : static_cast<long double>(b.decimal_);
      if (x < y) return std::strong_ordering::less;
      if (y < x) return std::strong_ordering::greater;
    }
    if (auto c = a.datatype_ <=> b.datatype_; c != 0) return c;
    return a.value_ <=> b.value_;
  }
  if (auto c = a.value_ <=> b.value_; c != 0) return c;
  return a.lang_ <=> b.lang_;
}

}  // namespace yp
