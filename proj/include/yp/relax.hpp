#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "yp/geo.hpp"
#include "yp/query.hpp"
#include "yp/results.hpp"

namespace yp {

struct PenaltyTable {
  double dropPenalty = 10.0;
  double numericStepPenalty = 3.0;
  // Each numeric step moves the bound outward by this fraction of its
  // current magnitude.
  double numericStepFraction = 0.25;
  double radiusStepPenalty = 2.0;
  double radiusStepFactor = 1.5;
  int maxWidenSteps = 4;

  friend bool operator==(const PenaltyTable&, const PenaltyTable&) = default;
};

// `key = value` lines; `#` comments. Keys: drop_penalty,
// numeric_step_penalty, numeric_step_fraction, radius_step_penalty,
// radius_step_factor, max_widen_steps. Missing keys keep their defaults;
// unknown keys and bad values throw ParseError.
PenaltyTable parsePenaltyTable(std::string_view text);

enum class ConstraintKind { CategoricalEq, NumericBound, Spatial };
enum class BoundOp { Le, Ge, Between };

struct Constraint {
  ConstraintKind kind = ConstraintKind::CategoricalEq;
  // Categorical and spatial: index into QueryAst::patterns.
  // Numeric: index into QueryAst::filters.
  std::size_t index = 0;
  // Predicate IRI constrained (empty for spatial, or for a filter variable
  // no pattern links to a property).
  std::string property;

  // CategoricalEq
  std::optional<Term> value;

  // NumericBound: comparisons on `var` inside filters[index].
  std::string var;
  BoundOp op = BoundOp::Le;
  std::vector<std::size_t> conjuncts;
  std::optional<Term> lower;
  std::optional<Term> upper;
  // Which sides of a between widen. Set by relaxSearch from the data: a side
  // widens only if some stored value lies beyond it; if none does, both do.
  bool widenLower = true;
  bool widenUpper = true;

  // Spatial
  double lat = 0.0;
  double lon = 0.0;
  double radiusKm = 0.0;

  bool widenable() const { return kind != ConstraintKind::CategoricalEq; }
  // Short label such as "foodtype = Veg" or "cost <= 20".
  std::string describe() const;
};

// Categorical equalities (constant string objects, not rdf:type), numeric
// comparison groups (one per variable per FILTER; `!=` is never relaxed) and
// spatial patterns, in query order: patterns first, then filters.
std::vector<Constraint> classifyConstraints(const QueryAst& q);

// Fills widenLower/widenUpper of numeric constraints from the stored values
// of each constraint's property.
void chooseWidenSides(std::vector<Constraint>& cs, const TripleStore& store);

enum class RelaxAction { Drop, Widen };

struct Relaxation {
  std::size_t constraint = 0;
  RelaxAction action = RelaxAction::Drop;
  int steps = 0;
  double penalty = 0.0;

  friend bool operator==(const Relaxation&, const Relaxation&) = default;
};

Relaxation makeRelaxation(const std::vector<Constraint>& cs, std::size_t constraint,
                          RelaxAction action, int steps, const PenaltyTable& table);

// The bound after `steps` widenings away from the feasible side.
double widenBound(double bound, bool upper, int steps, const PenaltyTable& table);

// Pure rewrite of q. Throws ValidationError when a relaxation targets a
// constraint that does not exist or no longer matches q, or when two target
// the same constraint.
QueryAst applyRelaxations(const QueryAst& q, const std::vector<Constraint>& cs,
                          const std::vector<Relaxation>& rs, const PenaltyTable& table);
QueryAst applyRelaxation(const QueryAst& q, const std::vector<Constraint>& cs,
                         const Relaxation& r, const PenaltyTable& table);

struct RelaxBudget {
  double maxPenalty = 40.0;
  std::size_t maxStates = 1024;
  // Keep going past the first level that yields rows.
  bool allLevels = false;
};

struct RelaxedResult {
  Row row;
  double penalty = 0.0;
  std::vector<Relaxation> applied;
};

struct RelaxOutcome {
  std::vector<std::string> vars;
  std::vector<Constraint> constraints;
  std::vector<RelaxedResult> results;
  // True when the budget ran out without a single row.
  bool exhausted = false;
  std::size_t statesExplored = 0;
};

// Best-first search over relaxation states ordered by total penalty. Each
// constraint takes at most one action: none, widen by 1..maxWidenSteps
// (numeric and spatial only), or drop. States of equal penalty form a level;
// the search stops after the first level that yields rows unless
// budget.allLevels. A row keeps the lowest penalty it was found at. Results
// are ordered by penalty, then row order.
RelaxOutcome relaxSearch(const QueryAst& q, const TripleStore& store, const GeoIndex& geo,
                         const RelaxBudget& budget, const PenaltyTable& table);

}  // namespace yp
