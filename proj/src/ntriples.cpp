#include "yp/ingest.hpp"

#include "yp/error.hpp"

namespace yp {

namespace {

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t lineNo) : s_(line), line_(lineNo) {}

  Triple parse() {
    Term subject = term();
    if (subject.isLiteral()) fail("subject cannot be a literal");
    Term predicate = term();
    if (!predicate.isIri()) fail("predicate must be an IRI");
    Term object = term();
    skipSpace();
    if (pos_ >= s_.size() || s_[pos_] != '.') fail("expected '.' at end of triple");
    ++pos_;
    skipSpace();
    if (pos_ < s_.size() && s_[pos_] != '#') fail("unexpected text after '.'");
    return Triple{std::move(subject), std::move(predicate), std::move(object)};
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, pos_ + 1); }

  void skipSpace() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  std::string iriRef() {
    ++pos_;  // '<'
    auto end = s_.find('>', pos_);
    if (end == std::string_view::npos) fail("unterminated IRI");
    std::string iri(s_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return iri;
  }

  Term term() {
    skipSpace();
    if (pos_ >= s_.size()) fail("unexpected end of line");
    std::size_t start = pos_;
    try {
      char c = s_[pos_];
      if (c == '<') return Term::iri(iriRef());
      if (c == '_') {
        if (pos_ + 1 >= s_.size() || s_[pos_ + 1] != ':') fail("expected '_:'");
        pos_ += 2;
        std::size_t b = pos_;
        while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != '\t') ++pos_;
        return Term::blank(std::string(s_.substr(b, pos_ - b)));
      }
      if (c == '"') return literal();
    } catch (const ValidationError& e) {
      pos_ = start;
      fail(e.what());
    }
    fail("expected IRI, blank node or literal");
  }

  Term literal() {
    ++pos_;
    std::string lex;
    while (true) {
      if (pos_ >= s_.size()) fail("unterminated literal");
      char c = s_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (pos_ >= s_.size() || (s_[pos_] != '"' && s_[pos_] != '\\')) fail("unsupported escape");
        lex.push_back(s_[pos_++]);
      } else {
        lex.push_back(c);
      }
    }
    if (pos_ < s_.size() && s_[pos_] == '@') {
      std::size_t b = ++pos_;
      while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != '\t') ++pos_;
      return Term::string(std::move(lex), std::string(s_.substr(b, pos_ - b)));
    }
    if (s_.substr(pos_, 2) == "^^") {
      pos_ += 2;
      if (pos_ >= s_.size() || s_[pos_] != '<') fail("expected datatype IRI");
      std::string dt = iriRef();
      return Term::literal(std::move(lex), dt);
    }
    return Term::string(std::move(lex));
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<Triple> parseNTriples(std::string_view text) {
  std::vector<Triple> out;
  std::size_t lineNo = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;
    out.push_back(LineParser(line, lineNo).parse());
  }
  return out;
}

std::size_t loadNTriples(std::string_view text, TripleStore& store) {
  std::vector<Triple> parsed = parseNTriples(text);
  std::size_t inserted = 0;
  for (const Triple& t : parsed) inserted += store.insert(t) ? 1 : 0;
  return inserted;
}

std::string exportNTriples(const TripleStore& store) {
  std::string out;
  for (const Triple& t : store) {
    if (t.object.isLiteral() && t.object.value().find_first_of("\r\n") != std::string::npos)
      throw ValidationError("literal with a line break cannot be exported: " + t.subject.toString());
    out += t.subject.toString();
    out += ' ';
    out += t.predicate.toString();
    out += ' ';
    out += t.object.toString();
    out += " .\n";
  }
  return out;
}

}  // namespace yp
