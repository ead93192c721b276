#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <set>

#include "yp/error.hpp"
#include "yp/query.hpp"

namespace yp {

std::string_view compareOpText(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "?";
}

namespace {

enum class Tok {
  End,
  IriRef,     // <...>      text = IRI
  PName,      // pfx:local  text = whole
  Var,        // ?x         text = name
  Blank,      // _:b        text = label
  String,     // "..."      text = unescaped
  LangTag,    // @en        text = tag
  Caret2,     // ^^
  Integer,
  Decimal,
  Word,       // bare identifier / keyword / 'a'
  LBrace, RBrace, LParen, RParen, Dot, Semicolon, Comma,
  Op,         // = != < <= > >=
  AndAnd,
  OrOr,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

bool isWordStart(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool isWordChar(char c) { return isWordStart(c) || (c >= '0' && c <= '9') || c == '-'; }
bool isDigit(char c) { return c >= '0' && c <= '9'; }

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  bool iriAhead() const {
    bool colon = false;
    for (std::size_t i = pos_ + 1; i < text_.size(); ++i) {
      char c = text_[i];
      if (c == '>') return colon && i > pos_ + 1;
      if (std::isspace(static_cast<unsigned char>(c)) || c == '<' || c == '"') return false;
      colon = colon || c == ':';
    }
    return false;
  }

  // In filter mode '<' opens an IRI only when a '>' closes it before any
  // whitespace and the text has a scheme; otherwise it is an operator.
  Token next(bool filterMode) {
    skipSpace();
    Token t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= text_.size()) return t;
    char c = text_[pos_];

    if (c == '<' && (!filterMode || iriAhead())) {
      std::size_t end = pos_ + 1;
      while (end < text_.size() && text_[end] != '>' && text_[end] != '\n') ++end;
      if (end >= text_.size() || text_[end] != '>') fail("unterminated IRI", t);
      t.kind = Tok::IriRef;
      t.text = std::string(text_.substr(pos_ + 1, end - pos_ - 1));
      advance(end + 1 - pos_);
      return t;
    }
    if (c == '<' || c == '>' || c == '=' || c == '!') {
      t.kind = Tok::Op;
      if (c == '!') {
        if (peekAt(1) != '=') fail("unexpected '!'", t);
        t.text = "!=";
      } else if ((c == '<' || c == '>') && peekAt(1) == '=') {
        t.text = std::string(1, c) + "=";
      } else {
        t.text = std::string(1, c);
      }
      advance(t.text.size());
      return t;
    }
    if (c == '&' || c == '|') {
      if (peekAt(1) != c) fail(std::string("unexpected '") + c + "'", t);
      t.kind = c == '&' ? Tok::AndAnd : Tok::OrOr;
      t.text = std::string(2, c);
      advance(2);
      return t;
    }
    if (c == '?' || c == '$') {
      std::size_t end = pos_ + 1;
      while (end < text_.size() && (isWordStart(text_[end]) || isDigit(text_[end]))) ++end;
      t.kind = Tok::Var;
      t.text = std::string(text_.substr(pos_ + 1, end - pos_ - 1));
      if (!isValidVariableName(t.text)) fail("invalid variable name", t);
      advance(end - pos_);
      return t;
    }
    if (c == '_' && peekAt(1) == ':') {
      std::size_t end = pos_ + 2;
      while (end < text_.size() && (isWordChar(text_[end]) || text_[end] == '.')) ++end;
      while (end > pos_ + 2 && text_[end - 1] == '.') --end;
      t.kind = Tok::Blank;
      t.text = std::string(text_.substr(pos_ + 2, end - pos_ - 2));
      if (t.text.empty()) fail("empty blank node label", t);
      advance(end - pos_);
      return t;
    }
    if (c == '"' || c == '\'') return lexString(t, c);
    if (c == '@') {
      std::size_t end = pos_ + 1;
      while (end < text_.size() && (isWordChar(text_[end]))) ++end;
      t.kind = Tok::LangTag;
      t.text = std::string(text_.substr(pos_ + 1, end - pos_ - 1));
      if (t.text.empty()) fail("empty language tag", t);
      advance(end - pos_);
      return t;
    }
    if (c == '^') {
      if (peekAt(1) != '^') fail("unexpected '^'", t);
      t.kind = Tok::Caret2;
      advance(2);
      return t;
    }
    if (isDigit(c) || ((c == '+' || c == '-' || c == '.') && startsNumber(pos_))) {
      return lexNumber(t);
    }
    switch (c) {
      case '{': t.kind = Tok::LBrace; break;
      case '}': t.kind = Tok::RBrace; break;
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case '.': t.kind = Tok::Dot; break;
      case ';': t.kind = Tok::Semicolon; break;
      case ',': t.kind = Tok::Comma; break;
      case '*': t.kind = Tok::Word; break;
      default: break;
    }
    if (t.kind != Tok::End) {
      t.text = std::string(1, c);
      advance(1);
      return t;
    }
    if (isWordStart(c) || c == ':') {
      std::size_t end = pos_;
      while (end < text_.size() && isWordChar(text_[end])) ++end;
      if (end < text_.size() && text_[end] == ':') {
        ++end;
        while (end < text_.size() && (isWordChar(text_[end]) || text_[end] == '.')) ++end;
        while (text_[end - 1] == '.') --end;
        t.kind = Tok::PName;
      } else {
        t.kind = Tok::Word;
      }
      t.text = std::string(text_.substr(pos_, end - pos_));
      advance(end - pos_);
      return t;
    }
    fail(std::string("unexpected character '") + c + "'", t);
  }

 private:
  [[noreturn]] static void fail(const std::string& msg, const Token& at) {
    throw ParseError(msg, at.line, at.column);
  }

  char peekAt(std::size_t offset) const {
    return pos_ + offset < text_.size() ? text_[pos_ + offset] : '\0';
  }

  bool startsNumber(std::size_t at) const {
    std::size_t i = at;
    if (text_[i] == '+' || text_[i] == '-') ++i;
    if (i < text_.size() && isDigit(text_[i])) return true;
    return i + 1 < text_.size() && text_[i] == '.' && isDigit(text_[i + 1]);
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i, ++pos_) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  void skipSpace() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance(1);
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance(1);
      } else {
        break;
      }
    }
  }

  Token lexString(Token t, char quote) {
    std::string out;
    std::size_t i = pos_ + 1;
    while (true) {
      if (i >= text_.size() || text_[i] == '\n') fail("unterminated string", t);
      char c = text_[i];
      if (c == quote) break;
      if (c == '\\') {
        if (i + 1 >= text_.size()) fail("unterminated string", t);
        char e = text_[i + 1];
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 'r': out.push_back('\r'); break;
          case 't': out.push_back('\t'); break;
          case '"': case '\'': case '\\': out.push_back(e); break;
          default: fail(std::string("unsupported escape '\\") + e + "'", t);
        }
        i += 2;
        continue;
      }
      out.push_back(c);
      ++i;
    }
    t.kind = Tok::String;
    t.text = std::move(out);
    advance(i + 1 - pos_);
    return t;
  }

  Token lexNumber(Token t) {
    std::size_t i = pos_;
    if (text_[i] == '+' || text_[i] == '-') ++i;
    while (i < text_.size() && isDigit(text_[i])) ++i;
    t.kind = Tok::Integer;
    if (i + 1 < text_.size() && text_[i] == '.' && isDigit(text_[i + 1])) {
      ++i;
      while (i < text_.size() && isDigit(text_[i])) ++i;
      t.kind = Tok::Decimal;
    }
    if (i < text_.size() && (text_[i] == 'e' || text_[i] == 'E')) {
      fail("exponent notation is not supported", t);
    }
    t.text = std::string(text_.substr(pos_, i - pos_));
    advance(i - pos_);
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

struct Position {
  std::size_t line;
  std::size_t column;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { advance(); }

  QueryAst parse() {
    QueryAst q;
    parsePrologue(q);
    bool selectAll = parseSelect(q);
    if (isWord("WHERE")) advance();
    expect(Tok::LBrace, "'{'");
    parseGroup(q);
    if (tok_.kind != Tok::End) fail("unexpected content after query: '" + tok_.text + "'");
    extractNearby(q);
    checkFilterTypes(q);
    if (selectAll) q.select = patternVariables(q);
    return q;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, tok_.line, tok_.column);
  }
  [[noreturn]] static void failAt(const std::string& msg, Position at) {
    throw ParseError(msg, at.line, at.column);
  }

  void advance() { tok_ = lexer_.next(filterDepth_ > 0); }

  bool isWord(std::string_view w) const { return tok_.kind == Tok::Word && iequals(tok_.text, w); }

  void expect(Tok kind, const char* what) {
    if (tok_.kind != kind) {
      fail(std::string("expected ") + what +
           (tok_.kind == Tok::End ? " but reached end of query" : " but found '" + tok_.text + "'"));
    }
    advance();
  }

  void parsePrologue(QueryAst& q) {
    while (isWord("PREFIX")) {
      advance();
      if (tok_.kind != Tok::PName || tok_.text.back() != ':') fail("expected prefix name");
      std::string name = tok_.text.substr(0, tok_.text.size() - 1);
      advance();
      if (tok_.kind != Tok::IriRef) fail("expected IRI for prefix '" + name + "'");
      if (!isValidIri(tok_.text)) fail("invalid IRI <" + tok_.text + ">");
      auto it = std::find_if(q.prefixes.begin(), q.prefixes.end(),
                             [&](const auto& p) { return p.first == name; });
      if (it != q.prefixes.end()) {
        it->second = tok_.text;
      } else {
        q.prefixes.emplace_back(name, tok_.text);
      }
      advance();
    }
    prefixes_ = q.prefixes;
  }

  bool parseSelect(QueryAst& q) {
    if (!isWord("SELECT")) fail("expected SELECT");
    advance();
    if (isWord("DISTINCT") || isWord("REDUCED")) advance();  // rows are always distinct
    if (tok_.kind == Tok::Word && tok_.text == "*") {
      advance();
      return true;
    }
    while (tok_.kind == Tok::Var) {
      Variable v{tok_.text};
      if (std::find(q.select.begin(), q.select.end(), v) == q.select.end()) q.select.push_back(v);
      advance();
    }
    if (q.select.empty()) fail("SELECT needs at least one variable");
    return false;
  }

  void parseGroup(QueryAst& q) {
    while (true) {
      if (tok_.kind == Tok::RBrace) {
        advance();
        return;
      }
      if (tok_.kind == Tok::End) fail("unbalanced braces: missing '}'");
      if (isWord("FILTER")) {
        parseFilter(q);
        if (tok_.kind == Tok::Dot) advance();
        continue;
      }
      parseTriplesSameSubject(q);
      if (tok_.kind == Tok::Dot) {
        advance();
      } else if (tok_.kind != Tok::RBrace && !isWord("FILTER")) {
        fail("expected '.' or '}' but found '" + tok_.text + "'");
      }
    }
  }

  PatternSlot parseVarOrTerm(QueryAst& q, bool predicatePosition) {
    Position at{tok_.line, tok_.column};
    switch (tok_.kind) {
      case Tok::Var: {
        Variable v{tok_.text};
        advance();
        return v;
      }
      case Tok::IriRef: {
        if (!isValidIri(tok_.text)) fail("invalid IRI <" + tok_.text + ">");
        Term t = Term::iri(tok_.text);
        advance();
        return t;
      }
      case Tok::PName: {
        Term t = expandPName(tok_.text);
        advance();
        return t;
      }
      case Tok::Word:
        if (predicatePosition && tok_.text == "a") {
          advance();
          return Term::iri(std::string(vocab::kRdfType));
        }
        fail("unexpected word '" + tok_.text + "'");
      case Tok::Blank: {
        Term t = Term::blank(tok_.text);
        usedLabels_.insert(tok_.text);
        advance();
        return t;
      }
      case Tok::String: return parseStringLiteral();
      case Tok::Integer:
      case Tok::Decimal: return parseNumber();
      case Tok::LParen:
        if (predicatePosition) fail("a collection cannot be a predicate");
        return parseCollection(q);
      default: break;
    }
    failAt(tok_.kind == Tok::End ? "unexpected end of query" : "unexpected '" + tok_.text + "'", at);
  }

  Term parseStringLiteral() {
    std::string lexical = tok_.text;
    Position at{tok_.line, tok_.column};
    advance();
    try {
      if (tok_.kind == Tok::LangTag) {
        std::string lang = tok_.text;
        advance();
        return Term::string(std::move(lexical), std::move(lang));
      }
      if (tok_.kind == Tok::Caret2) {
        advance();
        std::string dt;
        if (tok_.kind == Tok::IriRef) {
          dt = tok_.text;
        } else if (tok_.kind == Tok::PName) {
          dt = expandPName(tok_.text).value();
        } else {
          fail("expected datatype IRI after '^^'");
        }
        advance();
        return Term::literal(std::move(lexical), dt);
      }
    } catch (const ValidationError& e) {
      failAt(e.what(), at);
    }
    return Term::string(std::move(lexical));
  }

  Term parseNumber() {
    Position at{tok_.line, tok_.column};
    std::string text = tok_.text;
    bool integer = tok_.kind == Tok::Integer;
    advance();
    try {
      return integer ? Term::integer(text) : Term::decimal(text);
    } catch (const ValidationError& e) {
      failAt(e.what(), at);
    }
  }

  Term expandPName(const std::string& pname) {
    auto colon = pname.find(':');
    std::string prefix = pname.substr(0, colon);
    auto it = std::find_if(prefixes_.begin(), prefixes_.end(),
                           [&](const auto& p) { return p.first == prefix; });
    if (it == prefixes_.end()) fail("undeclared prefix '" + prefix + ":'");
    std::string iri = it->second + pname.substr(colon + 1);
    if (!isValidIri(iri)) fail("invalid IRI <" + iri + ">");
    return Term::iri(iri);
  }

  Term freshBlank() {
    std::string label;
    do {
      label = "genid" + std::to_string(blankCounter_++);
    } while (usedLabels_.count(label) != 0);
    usedLabels_.insert(label);
    return Term::blank(label);
  }

  PatternSlot parseCollection(QueryAst& q) {
    Position at{tok_.line, tok_.column};
    advance();  // '('
    std::vector<PatternSlot> items;
    while (tok_.kind != Tok::RParen) {
      if (tok_.kind == Tok::End) failAt("unterminated collection", at);
      items.push_back(parseVarOrTerm(q, false));
    }
    advance();
    Term nil = Term::iri(std::string(vocab::kRdfNil));
    if (items.empty()) return nil;
    Term first = Term::iri(std::string(vocab::kRdfFirst));
    Term rest = Term::iri(std::string(vocab::kRdfRest));
    std::vector<Term> nodes;
    for (std::size_t i = 0; i < items.size(); ++i) nodes.push_back(freshBlank());
    for (std::size_t i = 0; i < items.size(); ++i) {
      addPattern(q, {nodes[i], first, items[i]}, at);
      addPattern(q, {nodes[i], rest, i + 1 < items.size() ? PatternSlot{nodes[i + 1]} : nil}, at);
    }
    return nodes.front();
  }

  void addPattern(QueryAst& q, TriplePattern p, Position at) {
    if (const auto* t = std::get_if<Term>(&p.subject); t && t->isLiteral()) {
      failAt("a literal cannot be a subject", at);
    }
    if (const auto* t = std::get_if<Term>(&p.predicate); t && !t->isIri()) {
      failAt("a predicate must be an IRI or variable", at);
    }
    q.patterns.emplace_back(std::move(p));
    positions_.push_back(at);
  }

  void parseTriplesSameSubject(QueryAst& q) {
    Position subjectAt{tok_.line, tok_.column};
    bool collectionSubject = tok_.kind == Tok::LParen;
    PatternSlot subject = parseVarOrTerm(q, false);
    if (collectionSubject && (tok_.kind == Tok::Dot || tok_.kind == Tok::RBrace)) return;
    (void)subjectAt;
    while (true) {
      Position verbAt{tok_.line, tok_.column};
      PatternSlot verb = parseVarOrTerm(q, true);
      while (true) {
        PatternSlot object = parseVarOrTerm(q, false);
        addPattern(q, {subject, verb, std::move(object)}, verbAt);
        if (tok_.kind != Tok::Comma) break;
        advance();
      }
      if (tok_.kind != Tok::Semicolon) break;
      while (tok_.kind == Tok::Semicolon) advance();
      if (tok_.kind == Tok::Dot || tok_.kind == Tok::RBrace || isWord("FILTER")) break;
    }
  }

  void parseFilter(QueryAst& q) {
    advance();  // FILTER
    ++filterDepth_;
    if (tok_.kind != Tok::LParen) fail("expected '(' after FILTER");
    FilterExpr expr;
    parseConjunction(expr);
    --filterDepth_;
    advance();  // token after the closing ')' is lexed in normal mode
    q.filters.push_back(std::move(expr));
  }

  // Consumes '(' conj ( '&&' conj )* ')' leaving tok_ on the closing ')'.
  void parseConjunction(FilterExpr& expr) {
    advance();  // '('
    while (true) {
      if (tok_.kind == Tok::LParen) {
        parseConjunction(expr);
        advance();
      } else {
        expr.conjuncts.push_back(parseComparison());
      }
      if (tok_.kind == Tok::AndAnd) {
        advance();
        continue;
      }
      if (tok_.kind == Tok::OrOr) fail("'||' is not supported in FILTER");
      if (tok_.kind != Tok::RParen) fail("expected ')' or '&&' in FILTER");
      return;
    }
  }

  Comparison parseComparison() {
    Position at{tok_.line, tok_.column};
    auto operand = [&]() -> PatternSlot {
      if (tok_.kind == Tok::Var) {
        Variable v{tok_.text};
        advance();
        return v;
      }
      if (tok_.kind == Tok::String) return parseStringLiteral();
      if (tok_.kind == Tok::Integer || tok_.kind == Tok::Decimal) return parseNumber();
      if (tok_.kind == Tok::IriRef || tok_.kind == Tok::PName) {
        if (tok_.kind == Tok::IriRef && !isValidIri(tok_.text)) fail("invalid IRI <" + tok_.text + ">");
        Term t = tok_.kind == Tok::IriRef ? Term::iri(tok_.text) : expandPName(tok_.text);
        advance();
        return t;
      }
      fail("expected variable, IRI or literal in FILTER");
    };
    PatternSlot lhs = operand();
    if (tok_.kind != Tok::Op) fail("expected comparison operator");
    std::string opText = tok_.text;
    advance();
    PatternSlot rhs = operand();

    CompareOp op = CompareOp::Eq;
    if (opText == "=") op = CompareOp::Eq;
    else if (opText == "!=") op = CompareOp::Ne;
    else if (opText == "<") op = CompareOp::Lt;
    else if (opText == "<=") op = CompareOp::Le;
    else if (opText == ">") op = CompareOp::Gt;
    else if (opText == ">=") op = CompareOp::Ge;

    const auto* lv = std::get_if<Variable>(&lhs);
    const auto* rv = std::get_if<Variable>(&rhs);
    if (lv && rv) failAt("comparisons between two variables are not supported", at);
    if (!lv && !rv) failAt("a comparison needs a variable", at);
    if (lv) {
      filterPositions_.emplace(lv->name, at);
      return Comparison{*lv, op, std::get<Term>(rhs)};
    }
    switch (op) {  // constant op var  ->  var op' constant
      case CompareOp::Lt: op = CompareOp::Gt; break;
      case CompareOp::Le: op = CompareOp::Ge; break;
      case CompareOp::Gt: op = CompareOp::Lt; break;
      case CompareOp::Ge: op = CompareOp::Le; break;
      default: break;
    }
    filterPositions_.emplace(rv->name, at);
    return Comparison{*rv, op, std::get<Term>(lhs)};
  }

  void checkFilterTypes(const QueryAst& q) const {
    std::map<std::string, bool> numericByVar;
    for (const FilterExpr& f : q.filters) {
      for (const Comparison& c : f.conjuncts) {
        bool numeric = c.constant.isNumeric();
        auto [it, fresh] = numericByVar.emplace(c.var.name, numeric);
        if (!fresh && it->second != numeric) {
          auto pos = filterPositions_.find(c.var.name);
          failAt("variable ?" + c.var.name + " is compared with both numbers and strings",
                 pos != filterPositions_.end() ? pos->second : Position{0, 0});
        }
      }
    }
  }

  // Rewrites `?x ext:nearby <list>` plus the list's rdf:first/rdf:rest
  // triples into a single NearbyPattern.
  void extractNearby(QueryAst& q) {
    const Term nearby = Term::iri(std::string(kNearbyIri));
    const Term first = Term::iri(std::string(vocab::kRdfFirst));
    const Term rest = Term::iri(std::string(vocab::kRdfRest));
    const Term nil = Term::iri(std::string(vocab::kRdfNil));

    std::vector<bool> consumed(q.patterns.size(), false);
    std::vector<std::optional<NearbyPattern>> replacement(q.patterns.size());

    auto findUnique = [&](const Term& node, const Term& pred, Position at) -> std::size_t {
      std::size_t found = q.patterns.size();
      for (std::size_t j = 0; j < q.patterns.size(); ++j) {
        const auto* tp = std::get_if<TriplePattern>(&q.patterns[j]);
        if (!tp) continue;
        const auto* s = std::get_if<Term>(&tp->subject);
        const auto* p = std::get_if<Term>(&tp->predicate);
        if (s && p && *s == node && *p == pred) {
          if (found != q.patterns.size()) failAt("nearby list node has two " + pred.value(), at);
          found = j;
        }
      }
      if (found == q.patterns.size()) failAt("malformed nearby list: missing " + pred.value(), at);
      return found;
    };

    for (std::size_t i = 0; i < q.patterns.size(); ++i) {
      const auto* tp = std::get_if<TriplePattern>(&q.patterns[i]);
      if (!tp) continue;
      const auto* pred = std::get_if<Term>(&tp->predicate);
      if (!pred || !(*pred == nearby)) continue;
      Position at = positions_[i];
      const auto* entity = std::get_if<Variable>(&tp->subject);
      if (!entity) failAt("the subject of ext:nearby must be a variable", at);
      const auto* head = std::get_if<Term>(&tp->object);
      if (!head || !(head->isBlank() || *head == nil)) {
        failAt("ext:nearby expects a list (lat lon radius)", at);
      }

      std::vector<double> values;
      Term node = *head;
      std::set<std::string> seen;
      while (!(node == nil)) {
        if (!node.isBlank() || !seen.insert(node.value()).second) {
          failAt("malformed nearby list", at);
        }
        std::size_t fi = findUnique(node, first, at);
        std::size_t ri = findUnique(node, rest, at);
        const auto& fp = std::get<TriplePattern>(q.patterns[fi]);
        const auto& rp = std::get<TriplePattern>(q.patterns[ri]);
        const auto* value = std::get_if<Term>(&fp.object);
        if (!value || !value->isNumeric()) failAt("nearby list items must be numbers", at);
        values.push_back(value->numericValue());
        const auto* next = std::get_if<Term>(&rp.object);
        if (!next) failAt("malformed nearby list", at);
        consumed[fi] = consumed[ri] = true;
        node = *next;
      }
      if (values.size() != 3) {
        failAt("ext:nearby list must have 3 elements (lat lon radius), got " +
                   std::to_string(values.size()),
               at);
      }
      NearbyPattern np{*entity, values[0], values[1], values[2]};
      if (std::abs(np.lat) > 90.0) failAt("nearby latitude out of range", at);
      if (std::abs(np.lon) > 180.0) failAt("nearby longitude out of range", at);
      if (!(np.radiusKm > 0.0)) failAt("nearby radius must be positive", at);
      replacement[i] = np;
    }

    std::vector<PatternItem> out;
    for (std::size_t i = 0; i < q.patterns.size(); ++i) {
      if (replacement[i]) {
        if (consumed[i]) failAt("malformed nearby list", positions_[i]);
        out.emplace_back(*replacement[i]);
      } else if (!consumed[i]) {
        out.push_back(std::move(q.patterns[i]));
      }
    }
    q.patterns = std::move(out);
  }

  static std::vector<Variable> patternVariables(const QueryAst& q) {
    std::vector<Variable> vars;
    auto note = [&](const PatternSlot& s) {
      if (const auto* v = std::get_if<Variable>(&s)) {
        if (std::find(vars.begin(), vars.end(), *v) == vars.end()) vars.push_back(*v);
      }
    };
    for (const PatternItem& item : q.patterns) {
      if (const auto* tp = std::get_if<TriplePattern>(&item)) {
        note(tp->subject);
        note(tp->predicate);
        note(tp->object);
      } else {
        note(std::get<NearbyPattern>(item).entity);
      }
    }
    return vars;
  }

  Lexer lexer_;
  Token tok_;
  int filterDepth_ = 0;
  std::vector<std::pair<std::string, std::string>> prefixes_;
  std::vector<Position> positions_;
  std::map<std::string, Position> filterPositions_;
  std::set<std::string> usedLabels_;
  std::size_t blankCounter_ = 0;
};

}  // namespace

QueryAst parseQuery(std::string_view text) { return Parser(text).parse(); }

}  // namespace yp
