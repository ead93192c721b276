#include "yp/results.hpp"

#include <algorithm>

#include "json.hpp"
#include "yp/error.hpp"
#include "yp/json_terms.hpp"

namespace yp {

bool rowLess(const Row& a, const Row& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].has_value() != b[i].has_value()) return !a[i].has_value();
    if (!a[i]) continue;
    auto c = *a[i] <=> *b[i];
    if (c != 0) return c < 0;
  }
  return a.size() < b.size();
}

void canonicalize(ResultSet& r) {
  std::sort(r.rows.begin(), r.rows.end(), rowLess);
  r.rows.erase(std::unique(r.rows.begin(), r.rows.end()), r.rows.end());
}

nlohmann::ordered_json termToJson(const Term& t) {
  nlohmann::ordered_json j;
  switch (t.kind()) {
    case TermKind::Iri:
      j["type"] = "uri";
      j["value"] = t.value();
      break;
    case TermKind::Blank:
      j["type"] = "bnode";
      j["value"] = t.value();
      break;
    case TermKind::Literal:
      j["type"] = "literal";
      j["value"] = t.value();
      if (!t.lang().empty()) {
        j["xml:lang"] = t.lang();
      } else if (t.datatype() != Datatype::String) {
        j["datatype"] = std::string(t.datatypeIri());
      }
      break;
  }
  return j;
}

Term termFromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("binding value must be an object");
  std::string type = j.at("type").get<std::string>();
  std::string value = j.at("value").get<std::string>();
  if (type == "uri") return Term::iri(std::move(value));
  if (type == "bnode") return Term::blank(std::move(value));
  if (type == "literal" || type == "typed-literal") {
    std::string lang = j.contains("xml:lang") ? j["xml:lang"].get<std::string>() : "";
    std::string dt = j.contains("datatype") ? j["datatype"].get<std::string>() : "";
    return Term::literal(std::move(value), dt, std::move(lang));
  }
  throw ValidationError("unknown binding type '" + type + "'");
}

nlohmann::ordered_json rowToJson(const std::vector<std::string>& vars, const Row& row) {
  nlohmann::ordered_json b = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < vars.size() && i < row.size(); ++i) {
    if (row[i]) b[vars[i]] = termToJson(*row[i]);
  }
  return b;
}

std::string toSparqlJson(const ResultSet& r) {
  nlohmann::ordered_json doc;
  doc["head"]["vars"] = r.vars;
  auto& bindings = doc["results"]["bindings"];
  bindings = nlohmann::ordered_json::array();
  for (const Row& row : r.rows) bindings.push_back(rowToJson(r.vars, row));
  return doc.dump();
}

ResultSet fromSparqlJson(std::string_view body) {
  try {
    auto doc = nlohmann::json::parse(body);
    ResultSet r;
    r.vars = doc.at("head").at("vars").get<std::vector<std::string>>();
    for (const auto& b : doc.at("results").at("bindings")) {
      if (!b.is_object()) throw ValidationError("binding must be an object");
      Row row(r.vars.size());
      for (auto it = b.begin(); it != b.end(); ++it) {
        auto pos = std::find(r.vars.begin(), r.vars.end(), it.key());
        if (pos == r.vars.end()) throw ValidationError("binding for undeclared variable " + it.key());
        row[static_cast<std::size_t>(pos - r.vars.begin())] = termFromJson(*it);
      }
      r.rows.push_back(std::move(row));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed SPARQL results JSON: ") + e.what(), 0, 0);
  } catch (const ValidationError& e) {
    throw ParseError(std::string("malformed SPARQL results JSON: ") + e.what(), 0, 0);
  }
}

}  // namespace yp
