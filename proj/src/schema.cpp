#include "yp/schema.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"

namespace yp {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

void rejectUnknownKeys(const json& obj, std::initializer_list<std::string_view> allowed,
                       const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      throw SchemaError(where + ": unknown key '" + it.key() + "'");
    }
  }
}

const json& requireKey(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(where + ": missing '" + key + "'");
  return *it;
}

std::string requireString(const json& obj, const char* key, const std::string& where) {
  const json& v = requireKey(obj, key, where);
  if (!v.is_string()) throw SchemaError(where + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

bool optionalBool(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return false;
  if (!it->is_boolean()) throw SchemaError(where + ": '" + key + "' must be a boolean");
  return it->get<bool>();
}

Range parseRange(const std::string& text, const std::string& where) {
  if (text == "string") return Range::String;
  if (text == "integer") return Range::Integer;
  if (text == "decimal") return Range::Decimal;
  if (text == "latlon") return Range::LatLon;
  throw SchemaError(where + ": unknown range '" + text + "'");
}

struct LatLonLexical {
  std::string lat;
  std::string lon;
};

// "lat,lon" -> the two decimal lexical forms; throws ValidationError.
LatLonLexical splitLatLon(std::string_view value) {
  auto comma = value.find(',');
  if (comma == std::string_view::npos) {
    throw ValidationError("expected 'lat,lon' but got '" + std::string(value) + "'");
  }
  LatLonLexical out{std::string(trim(value.substr(0, comma))),
                    std::string(trim(value.substr(comma + 1)))};
  double lat = Term::decimal(out.lat).numericValue();
  double lon = Term::decimal(out.lon).numericValue();
  if (std::abs(lat) > 90.0) throw ValidationError("latitude out of range: " + out.lat);
  if (std::abs(lon) > 180.0) throw ValidationError("longitude out of range: " + out.lon);
  return out;
}

// Term for a single non-latlon value; throws ValidationError.
Term valueTerm(const PropertyDef& p, std::string_view value) {
  switch (p.range) {
    case Range::String:
      if (value.empty()) throw ValidationError("empty value");
      if (value.find_first_of("\r\n") != std::string_view::npos) {
        throw ValidationError("line breaks are not allowed in values");
      }
      return Term::string(std::string(value));
    case Range::Integer: return Term::integer(trim(value));
    case Range::Decimal: return Term::decimal(trim(value));
    case Range::LatLon: break;
  }
  throw ValidationError("latlon value has no single-term form");
}

std::string labelFor(const std::string& name) {
  std::string label = name;
  if (!label.empty() && label[0] >= 'a' && label[0] <= 'z') {
    label[0] = static_cast<char>(label[0] - 'a' + 'A');
  }
  return label;
}

}  // namespace

std::string_view rangeName(Range r) {
  switch (r) {
    case Range::String: return "string";
    case Range::Integer: return "integer";
    case Range::Decimal: return "decimal";
    case Range::LatLon: return "latlon";
  }
  return "?";
}

const PropertyDef* ClassDef::find(std::string_view property) const {
  for (const auto& p : properties) {
    if (p.name == property) return &p;
  }
  return nullptr;
}

const PropertyDef* ClassDef::geoProperty() const {
  for (const auto& p : properties) {
    if (p.range == Range::LatLon) return &p;
  }
  return nullptr;
}

Schema::Schema(std::string ns, std::vector<ClassDef> classes)
    : ns_(std::move(ns)), classes_(std::move(classes)) {}

const ClassDef* Schema::findClass(std::string_view name) const {
  for (const auto& c : classes_) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Schema loadSchema(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("schema is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("schema: top level must be an object");
  rejectUnknownKeys(doc, {"namespace", "classes"}, "schema");

  std::string ns = requireString(doc, "namespace", "schema");
  if (!isValidIri(ns)) throw SchemaError("schema: namespace '" + ns + "' is not a valid IRI");

  const json& classesJson = requireKey(doc, "classes", "schema");
  if (!classesJson.is_array()) throw SchemaError("schema: 'classes' must be an array");

  std::vector<ClassDef> classes;
  std::set<std::string> classNames;
  for (std::size_t ci = 0; ci < classesJson.size(); ++ci) {
    const json& cj = classesJson[ci];
    std::string where = "classes[" + std::to_string(ci) + "]";
    if (!cj.is_object()) throw SchemaError(where + ": must be an object");
    rejectUnknownKeys(cj, {"name", "display", "properties"}, where);

    ClassDef cls;
    cls.name = requireString(cj, "name", where);
    where = "class '" + cls.name + "'";
    if (!isValidVariableName(cls.name)) throw SchemaError(where + ": invalid class name");
    if (!classNames.insert(cls.name).second) throw SchemaError(where + ": duplicate class");

    const json& propsJson = requireKey(cj, "properties", where);
    if (!propsJson.is_array()) throw SchemaError(where + ": 'properties' must be an array");
    std::set<std::string> propNames;
    for (std::size_t pi = 0; pi < propsJson.size(); ++pi) {
      const json& pj = propsJson[pi];
      std::string pwhere = where + " properties[" + std::to_string(pi) + "]";
      if (!pj.is_object()) throw SchemaError(pwhere + ": must be an object");
      rejectUnknownKeys(pj, {"name", "range", "functional", "mandatory"}, pwhere);
      PropertyDef prop;
      prop.name = requireString(pj, "name", pwhere);
      pwhere = where + " property '" + prop.name + "'";
      if (!isValidVariableName(prop.name)) throw SchemaError(pwhere + ": invalid property name");
      if (!propNames.insert(prop.name).second) throw SchemaError(pwhere + ": duplicate property");
      prop.range = parseRange(requireString(pj, "range", pwhere), pwhere);
      prop.functional = optionalBool(pj, "functional", pwhere);
      prop.mandatory = optionalBool(pj, "mandatory", pwhere);
      cls.properties.push_back(std::move(prop));
    }

    auto latlonCount = std::count_if(cls.properties.begin(), cls.properties.end(),
                                     [](const PropertyDef& p) { return p.range == Range::LatLon; });
    if (latlonCount > 1) throw SchemaError(where + ": at most one latlon property is allowed");
    if (const PropertyDef* geo = cls.geoProperty()) {
      if (!geo->functional) {
        throw SchemaError(where + " property '" + geo->name + "': latlon must be functional");
      }
      if (cls.find(kLatProperty) || cls.find(kLongProperty)) {
        throw SchemaError(where + ": 'lat' and 'long' are reserved when a latlon property exists");
      }
    }

    if (cj.find("display") == cj.end()) throw SchemaError(where + ": missing display-name property");
    cls.display = requireString(cj, "display", where);
    const PropertyDef* display = cls.find(cls.display);
    if (display == nullptr) {
      throw SchemaError(where + ": display property '" + cls.display + "' is not declared");
    }
    if (display->range == Range::LatLon) {
      throw SchemaError(where + ": display property cannot be latlon");
    }
    classes.push_back(std::move(cls));
  }
  return Schema(std::move(ns), std::move(classes));
}

std::vector<Violation> validateRecord(const BusinessRecord& r, const Schema& s) {
  const ClassDef* cls = s.findClass(r.className);
  if (cls == nullptr) throw NotFoundError("unknown class '" + r.className + "'");

  std::vector<Violation> out;
  for (const auto& [property, values] : r.values) {
    if (cls->find(property) == nullptr) {
      out.push_back({property, "property is not declared for class " + cls->name});
    }
  }
  for (const PropertyDef& p : cls->properties) {
    auto it = r.values.find(p.name);
    std::size_t count = it == r.values.end() ? 0 : it->second.size();
    if (p.mandatory && count == 0) {
      out.push_back({p.name, "mandatory property is missing"});
      continue;
    }
    if (count == 0) continue;
    if (p.functional && count > 1) {
      out.push_back({p.name, "functional property has " + std::to_string(count) + " values"});
    }
    std::set<std::string> seen;
    for (const std::string& value : it->second) {
      try {
        if (p.range == Range::LatLon) {
          auto parts = splitLatLon(value);
          if (!seen.insert(parts.lat + "," + parts.lon).second) {
            out.push_back({p.name, "duplicate value '" + value + "'"});
          }
        } else {
          Term t = valueTerm(p, value);
          if (!seen.insert(t.value()).second) {
            out.push_back({p.name, "duplicate value '" + value + "'"});
          }
        }
      } catch (const ValidationError& e) {
        out.push_back({p.name, "value '" + value + "' is not a valid " +
                                   std::string(rangeName(p.range)) + ": " + e.what()});
      }
    }
  }
  return out;
}

std::vector<Triple> recordToTriples(const BusinessRecord& r, const Term& subject,
                                    const Schema& s) {
  auto violations = validateRecord(r, s);
  if (!violations.empty()) {
    throw ValidationError("record is invalid: " + violations.front().property + ": " +
                          violations.front().message);
  }
  const ClassDef& cls = *s.findClass(r.className);
  std::vector<Triple> out;
  out.push_back({subject, Term::iri(std::string(vocab::kRdfType)), s.classIri(cls.name)});
  for (const PropertyDef& p : cls.properties) {
    auto it = r.values.find(p.name);
    if (it == r.values.end()) continue;
    for (const std::string& value : it->second) {
      if (p.range == Range::LatLon) {
        auto parts = splitLatLon(value);
        out.push_back({subject, s.latIri(), Term::decimal(parts.lat)});
        out.push_back({subject, s.longIri(), Term::decimal(parts.lon)});
      } else {
        out.push_back({subject, s.propertyIri(p.name), valueTerm(p, value)});
      }
    }
  }
  return out;
}

BusinessRecord recordFromTriples(const TripleStore& store, const Term& subject,
                                 const Schema& s) {
  Term rdfType = Term::iri(std::string(vocab::kRdfType));
  const ClassDef* cls = nullptr;
  for (const Triple& t : store.matchPattern({subject, rdfType, Wildcard{}})) {
    if (!t.object.isIri() || t.object.value().rfind(s.ns(), 0) != 0) continue;
    cls = s.findClass(std::string_view(t.object.value()).substr(s.ns().size()));
    if (cls != nullptr) break;
  }
  if (cls == nullptr) throw NotFoundError("no declared class for " + subject.toString());

  BusinessRecord r;
  r.className = cls->name;
  for (const PropertyDef& p : cls->properties) {
    if (p.range == Range::LatLon) {
      auto lats = store.matchPattern({subject, s.latIri(), Wildcard{}});
      auto longs = store.matchPattern({subject, s.longIri(), Wildcard{}});
      if (lats.size() == 1 && longs.size() == 1) {
        r.values[p.name].push_back(lats[0].object.value() + "," + longs[0].object.value());
      }
      continue;
    }
    for (const Triple& t : store.matchPattern({subject, s.propertyIri(p.name), Wildcard{}})) {
      r.values[p.name].push_back(t.object.value());
    }
  }
  return r;
}

FormSpec formSpec(std::string_view className, const Schema& s) {
  const ClassDef* cls = s.findClass(className);
  if (cls == nullptr) throw NotFoundError("unknown class '" + std::string(className) + "'");
  FormSpec form;
  form.className = cls->name;
  form.display = cls->display;
  for (const PropertyDef& p : cls->properties) {
    FormField f;
    f.name = p.name;
    f.label = labelFor(p.name);
    f.range = p.range;
    f.mandatory = p.mandatory;
    f.multivalued = p.multivalued();
    switch (p.range) {
      case Range::String: f.operators = {"="}; break;
      case Range::Integer:
      case Range::Decimal: f.operators = {"=", "<=", ">=", "between"}; break;
      case Range::LatLon: f.operators = {"nearby"}; break;
    }
    form.fields.push_back(std::move(f));
  }
  return form;
}

std::string formSpecJson(const FormSpec& form) {
  nlohmann::ordered_json doc;
  doc["class"] = form.className;
  doc["display"] = form.display;
  doc["fields"] = nlohmann::ordered_json::array();
  for (const FormField& f : form.fields) {
    nlohmann::ordered_json field;
    field["name"] = f.name;
    field["label"] = f.label;
    field["range"] = rangeName(f.range);
    field["mandatory"] = f.mandatory;
    field["multivalued"] = f.multivalued;
    field["operators"] = f.operators;
    doc["fields"].push_back(std::move(field));
  }
  return doc.dump();
}

}  // namespace yp
