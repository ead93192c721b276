#include <sstream>

#include "yp/query.hpp"

namespace yp {

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

std::string printTerm(const Term& t) {
  switch (t.kind()) {
    case TermKind::Iri: return "<" + t.value() + ">";
    case TermKind::Blank: return "_:" + t.value();
    case TermKind::Literal: break;
  }
  switch (t.datatype()) {
    case Datatype::Integer: return t.value();
    case Datatype::Decimal:
      if (t.value().find('.') != std::string::npos) return t.value();
      return quoted(t.value()) + "^^<" + std::string(vocab::kXsdDecimal) + ">";
    case Datatype::String: break;
  }
  return t.lang().empty() ? quoted(t.value()) : quoted(t.value()) + "@" + t.lang();
}

std::string printSlot(const PatternSlot& s) {
  if (const auto* v = std::get_if<Variable>(&s)) return "?" + v->name;
  if (const auto* t = std::get_if<Term>(&s)) return printTerm(*t);
  return "[]";
}

}  // namespace

std::string printQuery(const QueryAst& q) {
  std::ostringstream out;
  for (const auto& [name, iri] : q.prefixes) out << "PREFIX " << name << ": <" << iri << ">\n";
  if (!q.prefixes.empty()) out << "\n";
  out << "SELECT";
  for (const Variable& v : q.select) out << " ?" << v.name;
  out << "\nWHERE\n{\n";
  for (const PatternItem& item : q.patterns) {
    if (const auto* tp = std::get_if<TriplePattern>(&item)) {
      out << "  " << printSlot(tp->subject) << " " << printSlot(tp->predicate) << " "
          << printSlot(tp->object) << " .\n";
    } else {
      const auto& np = std::get<NearbyPattern>(item);
      out << "  ?" << np.entity.name << " <" << kNearbyIri << "> ( " << formatDecimal(np.lat)
          << " " << formatDecimal(np.lon) << " " << formatDecimal(np.radiusKm) << " ) .\n";
    }
  }
  for (const FilterExpr& f : q.filters) {
    out << "  FILTER(";
    for (std::size_t i = 0; i < f.conjuncts.size(); ++i) {
      const Comparison& c = f.conjuncts[i];
      if (i > 0) out << " && ";
      out << "?" << c.var.name << " " << compareOpText(c.op) << " " << printTerm(c.constant);
    }
    out << ")\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace yp
