#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "yp/geo.hpp"
#include "yp/query.hpp"
#include "yp/schema.hpp"

namespace yp {

// Prefix labels of generated queries.
inline constexpr std::string_view kGeoPrefixIri = "http://www.w3.org/2003/01/geo/wgs84_pos#";
inline constexpr std::string_view kExtPrefixIri = "java:org.geospatialweb.arqext.";

struct PropertyFilter {
  // JSON numbers become integer or decimal literals, strings string literals.
  std::optional<Term> eq;
  std::optional<Term> min;
  std::optional<Term> max;
};

struct NearSpec {
  std::optional<double> lat;
  std::optional<double> lon;
  std::optional<std::string> locality;
  double radiusKm = 1.0;
};

struct StructuredQuery {
  std::string className;
  std::map<std::string, PropertyFilter> filters;
  std::optional<NearSpec> near;
  bool relax = true;
  // Return every relaxation level within budget, not only the first.
  bool allLevels = false;
  // Send the unrelaxed query to the configured endpoints as well.
  bool federate = false;
  std::optional<std::vector<std::string>> select;
};

// Thrown for requests that are well-formed JSON but break the schema.
class QueryRejected : public ValidationError {
 public:
  QueryRejected(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// Body of POST /search:
//   {"class": "Restaurant",
//    "filters": {"foodtype": "Veg", "cost": {"min": 50, "max": 100}},
//    "near": {"lat": .., "lon": .., "radiusKm": ..} | {"locality": "..", "radiusKm": ..},
//    "select": ["name", "address"], "relax": true, "allLevels": false,
//    "federate": false}
// Throws ParseError for malformed JSON and QueryRejected for schema
// violations (unknown class or property, wrong operator for the range).
StructuredQuery parseStructuredQuery(std::string_view body, const Schema& schema);

// Instantiates the query template. Locality names resolve through the
// gazetteer (LocalityNotFound propagates). Pattern order: nearby, string
// equalities, numeric properties, projections with the display property
// last. A class-only query gets an rdf:type pattern.
QueryAst structuredToAst(const StructuredQuery& sq, const Schema& schema, const Gazetteer& gazetteer);
std::string structuredToSparql(const StructuredQuery& sq, const Schema& schema,
                               const Gazetteer& gazetteer);

// Parses the JSON body of POST /register: {"class": "...", "values": {...}}
// with string, number or array values; a latlon value may be
// {"lat": .., "lon": ..} or "lat,lon". An optional "iri" asks for an update.
struct RegisterRequest {
  BusinessRecord record;
  std::optional<std::string> iri;
};
RegisterRequest parseRegisterRequest(std::string_view body);

}  // namespace yp
