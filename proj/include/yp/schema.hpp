#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "yp/error.hpp"
#include "yp/triplestore.hpp"

namespace yp {

enum class Range { String, Integer, Decimal, LatLon };

std::string_view rangeName(Range r);

struct PropertyDef {
  std::string name;
  Range range = Range::String;
  bool functional = false;
  bool mandatory = false;

  bool multivalued() const { return !functional; }
  friend bool operator==(const PropertyDef&, const PropertyDef&) = default;
};

struct ClassDef {
  std::string name;
  // Name of the property shown as the entity's label.
  std::string display;
  std::vector<PropertyDef> properties;

  const PropertyDef* find(std::string_view property) const;
  // The latlon-ranged property, if the class declares one.
  const PropertyDef* geoProperty() const;
  friend bool operator==(const ClassDef&, const ClassDef&) = default;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

// Latlon values expand to two decimal triples under these property names.
inline constexpr std::string_view kLatProperty = "lat";
inline constexpr std::string_view kLongProperty = "long";

class Schema {
 public:
  Schema() = default;
  Schema(std::string ns, std::vector<ClassDef> classes);

  const std::string& ns() const { return ns_; }
  const std::vector<ClassDef>& classes() const { return classes_; }
  const ClassDef* findClass(std::string_view name) const;

  Term classIri(std::string_view className) const { return Term::iri(ns_ + std::string(className)); }
  Term propertyIri(std::string_view property) const {
    return Term::iri(ns_ + std::string(property));
  }
  Term latIri() const { return propertyIri(kLatProperty); }
  Term longIri() const { return propertyIri(kLongProperty); }

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::string ns_;
  std::vector<ClassDef> classes_;
};

// Parses the JSON schema document:
//   {"namespace": "...", "classes": [{"name": "...", "display": "...",
//     "properties": [{"name", "range", "functional", "mandatory"}]}]}
// Unknown keys are rejected. Throws SchemaError naming the offending entry.
Schema loadSchema(std::string_view document);

struct BusinessRecord {
  std::string className;
  // property -> lexical values; latlon values are written "lat,lon"
  std::map<std::string, std::vector<std::string>> values;

  friend bool operator==(const BusinessRecord&, const BusinessRecord&) = default;
};

struct Violation {
  std::string property;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Empty result means the record is valid. Throws NotFoundError when the
// record's class is not declared.
std::vector<Violation> validateRecord(const BusinessRecord& r, const Schema& s);

// One rdf:type triple plus one triple per value, in property declaration
// order. Throws ValidationError if the record is invalid.
std::vector<Triple> recordToTriples(const BusinessRecord& r, const Term& subject,
                                    const Schema& s);

// Rebuilds the record stored under `subject`. Values of each property come
// back in term order. Throws NotFoundError if the subject has no declared
// class.
BusinessRecord recordFromTriples(const TripleStore& store, const Term& subject,
                                 const Schema& s);

struct FormField {
  std::string name;
  std::string label;
  Range range = Range::String;
  bool mandatory = false;
  bool multivalued = false;
  std::vector<std::string> operators;

  friend bool operator==(const FormField&, const FormField&) = default;
};

struct FormSpec {
  std::string className;
  std::string display;
  std::vector<FormField> fields;

  friend bool operator==(const FormSpec&, const FormSpec&) = default;
};

FormSpec formSpec(std::string_view className, const Schema& s);
std::string formSpecJson(const FormSpec& form);

}  // namespace yp
