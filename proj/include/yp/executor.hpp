#pragma once

#include "yp/geo.hpp"
#include "yp/query.hpp"
#include "yp/results.hpp"

namespace yp {

// Evaluates the basic graph pattern of `q`. Nearby patterns run first and
// draw candidates from `geo`; the remaining patterns join left to right.
// A FILTER comparison that is unbound or compares across types removes the
// row. Rows are projected onto q.select, deduplicated and sorted.
ResultSet execute(const QueryAst& q, const TripleStore& store, const GeoIndex& geo);

// Outcome of one comparison between a bound term and a filter constant:
// nullopt when the two are not comparable (type error).
std::optional<bool> evalComparison(const Term& value, CompareOp op, const Term& constant);

}  // namespace yp
