#include "yp/structured.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "json.hpp"

namespace yp {

using nlohmann::json;

namespace {

std::string joinViolations(const std::vector<Violation>& vs) {
  std::string msg;
  for (const Violation& v : vs) {
    if (!msg.empty()) msg += "; ";
    msg += v.property.empty() ? v.message : v.property + ": " + v.message;
  }
  return msg;
}

std::optional<Term> numberTerm(const json& j) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
      return std::nullopt;
    return Term::integer(j.get<std::int64_t>());
  }
  if (j.is_number_float()) return Term::decimal(j.get<double>());
  return std::nullopt;
}

bool isNumericRange(Range r) { return r == Range::Integer || r == Range::Decimal; }

class RequestReader {
 public:
  explicit RequestReader(const Schema& schema) : schema_(schema) {}

  StructuredQuery read(const json& doc) {
    StructuredQuery sq;
    if (!doc.is_object()) {
      fail("", "request body must be a JSON object");
      throw QueryRejected(std::move(violations_));
    }
    static const std::set<std::string> known = {"class", "filters", "near", "select",
                                                "relax", "allLevels", "federate"};
    for (auto it = doc.begin(); it != doc.end(); ++it)
      if (!known.count(it.key())) fail(it.key(), "unknown key");

    auto cls = doc.find("class");
    if (cls == doc.end() || !cls->is_string()) {
      fail("class", "a class name is required");
      throw QueryRejected(std::move(violations_));
    }
    sq.className = cls->get<std::string>();
    const ClassDef* def = schema_.findClass(sq.className);
    if (def == nullptr) {
      fail("class", "unknown class '" + sq.className + "'");
      throw QueryRejected(std::move(violations_));
    }

    if (auto f = doc.find("filters"); f != doc.end()) readFilters(*f, *def, sq);
    if (auto n = doc.find("near"); n != doc.end()) readNear(*n, *def, sq);
    if (auto s = doc.find("select"); s != doc.end()) readSelect(*s, *def, sq);
    readFlag(doc, "relax", sq.relax);
    readFlag(doc, "allLevels", sq.allLevels);
    readFlag(doc, "federate", sq.federate);

    if (!violations_.empty()) throw QueryRejected(std::move(violations_));
    return sq;
  }

 private:
  void fail(std::string property, std::string message) {
    violations_.push_back({std::move(property), std::move(message)});
  }

  void readFlag(const json& doc, const char* key, bool& out) {
    auto it = doc.find(key);
    if (it == doc.end()) return;
    if (!it->is_boolean()) {
      fail(key, "must be a boolean");
      return;
    }
    out = it->get<bool>();
  }

  std::optional<Term> valueFor(const PropertyDef& p, const json& v, const std::string& where) {
    if (isNumericRange(p.range)) {
      auto t = numberTerm(v);
      if (!t) fail(where, "expected a number");
      return t;
    }
    if (!v.is_string()) {
      fail(where, "expected a string");
      return std::nullopt;
    }
    return Term::string(v.get<std::string>());
  }

  void readFilters(const json& f, const ClassDef& def, StructuredQuery& sq) {
    if (!f.is_object()) {
      fail("filters", "must be an object");
      return;
    }
    for (auto it = f.begin(); it != f.end(); ++it) {
      const std::string& name = it.key();
      const PropertyDef* p = def.find(name);
      if (p == nullptr) {
        fail(name, "unknown property of " + def.name);
        continue;
      }
      if (p->range == Range::LatLon) {
        fail(name, "location properties are queried with \"near\"");
        continue;
      }
      PropertyFilter pf;
      const json& v = *it;
      if (!v.is_object()) {
        pf.eq = valueFor(*p, v, name);
      } else {
        std::size_t before = violations_.size();
        for (auto op = v.begin(); op != v.end(); ++op) {
          const std::string& key = op.key();
          if (key == "eq") {
            pf.eq = valueFor(*p, *op, name);
          } else if (key == "min" || key == "max") {
            if (!isNumericRange(p->range)) {
              fail(name, "range operators apply to numeric properties only");
              continue;
            }
            (key == "min" ? pf.min : pf.max) = valueFor(*p, *op, name);
          } else {
            fail(name, "unknown operator '" + key + "'");
          }
        }
        if (violations_.size() != before) continue;
        if (pf.eq && (pf.min || pf.max)) fail(name, "eq cannot be combined with min or max");
        if (!pf.eq && !pf.min && !pf.max) fail(name, "no condition given");
        if (pf.min && pf.max && pf.min->numericValue() > pf.max->numericValue())
          fail(name, "min exceeds max");
      }
      sq.filters[name] = std::move(pf);
    }
  }

  void readNear(const json& n, const ClassDef& def, StructuredQuery& sq) {
    if (!n.is_object()) {
      fail("near", "must be an object");
      return;
    }
    if (def.geoProperty() == nullptr) fail("near", def.name + " has no location property");
    NearSpec near;
    for (auto it = n.begin(); it != n.end(); ++it) {
      const std::string& key = it.key();
      if (key == "lat" || key == "lon" || key == "radiusKm") {
        if (!it->is_number()) {
          fail("near." + key, "must be a number");
          continue;
        }
        double v = it->get<double>();
        if (key == "lat") near.lat = v;
        if (key == "lon") near.lon = v;
        if (key == "radiusKm") near.radiusKm = v;
      } else if (key == "locality") {
        if (!it->is_string() || it->get<std::string>().empty()) {
          fail("near.locality", "must be a non-empty string");
          continue;
        }
        near.locality = it->get<std::string>();
      } else {
        fail("near." + key, "unknown key");
      }
    }
    bool coords = near.lat || near.lon;
    if (coords && near.locality) fail("near", "give either lat/lon or locality, not both");
    if (!coords && !near.locality) fail("near", "lat/lon or locality is required");
    if (coords && !(near.lat && near.lon)) fail("near", "lat and lon must both be given");
    if (near.lat && near.lon) {
      try {
        LatLon::make(*near.lat, *near.lon);
      } catch (const ValidationError& e) {
        fail("near", e.what());
      }
    }
    if (!(near.radiusKm > 0.0)) fail("near.radiusKm", "must be positive");
    sq.near = near;
  }

  void readSelect(const json& s, const ClassDef& def, StructuredQuery& sq) {
    if (!s.is_array() || s.empty()) {
      fail("select", "must be a non-empty list of property names");
      return;
    }
    std::vector<std::string> out;
    for (const json& v : s) {
      if (!v.is_string()) {
        fail("select", "property names must be strings");
        continue;
      }
      std::string name = v.get<std::string>();
      const PropertyDef* p = def.find(name);
      if (p == nullptr) {
        fail(name, "unknown property of " + def.name);
      } else if (p->range == Range::LatLon) {
        fail(name, "location properties cannot be selected");
      } else if (std::find(out.begin(), out.end(), name) != out.end()) {
        fail(name, "selected twice");
      } else {
        out.push_back(std::move(name));
      }
    }
    sq.select = std::move(out);
  }

  const Schema& schema_;
  std::vector<Violation> violations_;
};

}  // namespace

QueryRejected::QueryRejected(std::vector<Violation> violations)
    : ValidationError(joinViolations(violations)), violations_(std::move(violations)) {}

StructuredQuery parseStructuredQuery(std::string_view body, const Schema& schema) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), 1, 0);
  }
  return RequestReader(schema).read(doc);
}

QueryAst structuredToAst(const StructuredQuery& sq, const Schema& schema, const Gazetteer& gazetteer) {
  const ClassDef* def = schema.findClass(sq.className);
  if (def == nullptr) throw QueryRejected({{"class", "unknown class '" + sq.className + "'"}});
  for (const auto& [name, f] : sq.filters) {
    const PropertyDef* p = def->find(name);
    if (p == nullptr || p->range == Range::LatLon)
      throw QueryRejected({{name, "not a queryable property of " + def->name}});
  }

  std::string entity = sq.className;
  for (char& c : entity) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (def->find(entity) != nullptr) entity += "_entity";
  Variable e{entity};
  auto prop = [&](const std::string& name) { return schema.propertyIri(name); };

  QueryAst q;
  q.prefixes = {{"geo", std::string(kGeoPrefixIri)},
                {"rest", schema.ns()},
                {"ext", std::string(kExtPrefixIri)}};

  std::vector<std::string> select;
  if (sq.select) {
    select = *sq.select;
  } else {
    select.push_back(def->display);
    if (sq.near && def->find("address") && def->display != "address") select.push_back("address");
  }
  for (const std::string& s : select) q.select.push_back(Variable{s});

  if (sq.near) {
    NearbyPattern np{e, 0.0, 0.0, sq.near->radiusKm};
    if (sq.near->locality) {
      const Locality& loc = gazetteer.resolve(*sq.near->locality);
      np.lat = loc.centroid.lat;
      np.lon = loc.centroid.lon;
    } else {
      np.lat = *sq.near->lat;
      np.lon = *sq.near->lon;
    }
    q.patterns.emplace_back(np);
  }
  if (sq.filters.empty() && !sq.near) {
    q.patterns.emplace_back(
        TriplePattern{e, Term::iri(std::string(vocab::kRdfType)), schema.classIri(sq.className)});
  }

  std::set<std::string> bound;
  for (const PropertyDef& p : def->properties) {
    auto it = sq.filters.find(p.name);
    if (it == sq.filters.end() || isNumericRange(p.range)) continue;
    q.patterns.emplace_back(TriplePattern{e, prop(p.name), *it->second.eq});
  }
  for (const PropertyDef& p : def->properties) {
    auto it = sq.filters.find(p.name);
    if (it == sq.filters.end() || !isNumericRange(p.range)) continue;
    Variable v{p.name};
    q.patterns.emplace_back(TriplePattern{e, prop(p.name), v});
    bound.insert(p.name);
    FilterExpr f;
    const PropertyFilter& pf = it->second;
    if (pf.eq) f.conjuncts.push_back({v, CompareOp::Eq, *pf.eq});
    if (pf.min) f.conjuncts.push_back({v, CompareOp::Ge, *pf.min});
    if (pf.max) f.conjuncts.push_back({v, CompareOp::Le, *pf.max});
    q.filters.push_back(std::move(f));
  }
  auto project = [&](const std::string& name) {
    if (!bound.insert(name).second) return;
    q.patterns.emplace_back(TriplePattern{e, prop(name), Variable{name}});
  };
  for (const std::string& s : select)
    if (s != def->display) project(s);
  for (const std::string& s : select)
    if (s == def->display) project(s);
  return q;
}

std::string structuredToSparql(const StructuredQuery& sq, const Schema& schema,
                               const Gazetteer& gazetteer) {
  return printQuery(structuredToAst(sq, schema, gazetteer));
}

RegisterRequest parseRegisterRequest(std::string_view body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), 1, 0);
  }
  if (!doc.is_object()) throw ValidationError("request body must be a JSON object");
  RegisterRequest req;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    if (key == "class") {
      if (!it->is_string()) throw ValidationError("class must be a string");
      req.record.className = it->get<std::string>();
    } else if (key == "iri") {
      if (!it->is_string()) throw ValidationError("iri must be a string");
      req.iri = it->get<std::string>();
    } else if (key != "values") {
      throw ValidationError("unknown key '" + key + "'");
    }
  }
  if (req.record.className.empty()) throw ValidationError("class is required");
  auto values = doc.find("values");
  if (values == doc.end() || !values->is_object()) throw ValidationError("values must be an object");

  auto lexical = [](const std::string& property, const json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return v.dump();
    if (v.is_number_float()) return formatDecimal(v.get<double>());
    if (v.is_object() && v.size() == 2 && v.contains("lat") && v.contains("lon") &&
        v["lat"].is_number() && v["lon"].is_number())
      return formatDecimal(v["lat"].get<double>()) + "," + formatDecimal(v["lon"].get<double>());
    throw ValidationError(property + ": unsupported value " + v.dump());
  };
  for (auto it = values->begin(); it != values->end(); ++it) {
    auto& out = req.record.values[it.key()];
    if (it->is_array()) {
      for (const json& v : *it) out.push_back(lexical(it.key(), v));
    } else {
      out.push_back(lexical(it.key(), *it));
    }
  }
  return req;
}

}  // namespace yp
