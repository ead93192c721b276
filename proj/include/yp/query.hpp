#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "yp/triplestore.hpp"

namespace yp {

// Predicate IRI of the spatial extension: `?x ext:nearby (lat lon radiusKm)`.
inline constexpr std::string_view kNearbyIri = "java:org.geospatialweb.arqext.nearby";

// `?entity ext:nearby (lat lon radiusKm)`: binds entity to every indexed IRI
// whose position lies within radiusKm of (lat, lon).
struct NearbyPattern {
  Variable entity;
  double lat = 0.0;
  double lon = 0.0;
  double radiusKm = 0.0;

  friend bool operator==(const NearbyPattern&, const NearbyPattern&) = default;
};

using PatternItem = std::variant<TriplePattern, NearbyPattern>;

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view compareOpText(CompareOp op);

struct Comparison {
  Variable var;
  CompareOp op = CompareOp::Eq;
  Term constant = Term::integer(0);

  friend bool operator==(const Comparison&, const Comparison&) = default;
};

// Conjunction of comparisons: FILTER(a && b && ...).
struct FilterExpr {
  std::vector<Comparison> conjuncts;

  friend bool operator==(const FilterExpr&, const FilterExpr&) = default;
};

struct QueryAst {
  // Declaration order is kept so printing is stable.
  std::vector<std::pair<std::string, std::string>> prefixes;
  std::vector<Variable> select;
  std::vector<PatternItem> patterns;
  std::vector<FilterExpr> filters;

  friend bool operator==(const QueryAst&, const QueryAst&) = default;
};

// Parses the supported SPARQL subset:
//   PREFIX declarations, SELECT ?v..., [WHERE] { triples and FILTERs }
// with `;` and `,` lists, `a`, collections `( ... )` and numeric/string
// literals. An ext:nearby triple whose object is a three-number list (either
// collection shorthand or an explicit rdf:first/rdf:rest chain) becomes a
// NearbyPattern. Throws ParseError with line and column.
QueryAst parseQuery(std::string_view text);

// Renders an AST as query text that parses back to an equal AST.
std::string printQuery(const QueryAst& q);

}  // namespace yp
