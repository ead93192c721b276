#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "yp/term.hpp"

namespace yp {

// One binding per projected variable, aligned with ResultSet::vars; an empty
// optional means the variable is unbound in this row.
using Row = std::vector<std::optional<Term>>;

struct ResultSet {
  std::vector<std::string> vars;
  std::vector<Row> rows;

  friend bool operator==(const ResultSet&, const ResultSet&) = default;
};

// Row order used everywhere results are sorted: column by column, unbound
// before bound, bound values by term order.
bool rowLess(const Row& a, const Row& b);

// Sorts rows and removes duplicates.
void canonicalize(ResultSet& r);

// SPARQL 1.1 Query Results JSON, keys in the order head, results.
std::string toSparqlJson(const ResultSet& r);

// Inverse of toSparqlJson. Throws ParseError on malformed documents.
ResultSet fromSparqlJson(std::string_view body);

}  // namespace yp
