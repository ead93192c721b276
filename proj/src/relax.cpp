#include "yp/relax.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>

#include "yp/executor.hpp"

namespace yp {

namespace {

constexpr double kLevelTolerance = 1e-9;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string localName(const std::string& iri) {
  auto cut = iri.find_last_of("/#");
  return cut == std::string::npos ? iri : iri.substr(cut + 1);
}

bool isBoundOp(CompareOp op) {
  return op == CompareOp::Lt || op == CompareOp::Le || op == CompareOp::Gt ||
         op == CompareOp::Ge || op == CompareOp::Eq;
}

Term widenedTerm(const Term& original, double widened) {
  if (original.datatype() == Datatype::Integer && std::nearbyint(widened) == widened &&
      std::fabs(widened) < 9.0e18) {
    return Term::integer(static_cast<std::int64_t>(widened));
  }
  return Term::decimal(widened);
}

}  // namespace

PenaltyTable parsePenaltyTable(std::string_view text) {
  PenaltyTable t;
  std::size_t lineNo = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++lineNo;
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key = value", lineNo, 0);
    std::string key(trim(line.substr(0, eq)));
    std::string_view raw = trim(line.substr(eq + 1));
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
    if (raw.empty() || ec != std::errc() || ptr != raw.data() + raw.size() || !std::isfinite(value))
      throw ParseError("value of '" + key + "' is not a number", lineNo, 0);

    if (key == "drop_penalty" || key == "numeric_step_penalty" || key == "radius_step_penalty") {
      if (value < 0) throw ParseError(key + " must be non-negative", lineNo, 0);
      (key == "drop_penalty" ? t.dropPenalty
                             : key == "numeric_step_penalty" ? t.numericStepPenalty
                                                             : t.radiusStepPenalty) = value;
    } else if (key == "numeric_step_fraction") {
      if (value <= 0) throw ParseError(key + " must be positive", lineNo, 0);
      t.numericStepFraction = value;
    } else if (key == "radius_step_factor") {
      if (value <= 1) throw ParseError(key + " must exceed 1", lineNo, 0);
      t.radiusStepFactor = value;
    } else if (key == "max_widen_steps") {
      if (value < 0 || value != std::floor(value) || value > 64)
        throw ParseError(key + " must be an integer in [0, 64]", lineNo, 0);
      t.maxWidenSteps = static_cast<int>(value);
    } else {
      throw ParseError("unknown key '" + key + "'", lineNo, 0);
    }
  }
  return t;
}

std::string Constraint::describe() const {
  std::string name = property.empty() ? var : localName(property);
  switch (kind) {
    case ConstraintKind::CategoricalEq:
      return name + " = " + value->value();
    case ConstraintKind::NumericBound:
      if (op == BoundOp::Le) return name + " <= " + upper->value();
      if (op == BoundOp::Ge) return name + " >= " + lower->value();
      return name + " between " + lower->value() + " and " + upper->value();
    case ConstraintKind::Spatial:
      return "within " + formatDecimal(radiusKm) + " km of (" + formatDecimal(lat) + ", " +
             formatDecimal(lon) + ")";
  }
  return name;
}

std::vector<Constraint> classifyConstraints(const QueryAst& q) {
  std::vector<Constraint> out;
  for (std::size_t i = 0; i < q.patterns.size(); ++i) {
    if (const auto* np = std::get_if<NearbyPattern>(&q.patterns[i])) {
      Constraint c;
      c.kind = ConstraintKind::Spatial;
      c.index = i;
      c.var = np->entity.name;
      c.lat = np->lat;
      c.lon = np->lon;
      c.radiusKm = np->radiusKm;
      out.push_back(std::move(c));
      continue;
    }
    const auto& tp = std::get<TriplePattern>(q.patterns[i]);
    const auto* pred = std::get_if<Term>(&tp.predicate);
    const auto* obj = std::get_if<Term>(&tp.object);
    if (!pred || !pred->isIri() || pred->value() == vocab::kRdfType) continue;
    if (!obj || !obj->isLiteral() || obj->isNumeric()) continue;
    Constraint c;
    c.kind = ConstraintKind::CategoricalEq;
    c.index = i;
    c.property = pred->value();
    c.value = *obj;
    out.push_back(std::move(c));
  }

  auto propertyOf = [&](const std::string& var) -> std::string {
    for (const PatternItem& item : q.patterns) {
      const auto* tp = std::get_if<TriplePattern>(&item);
      if (!tp) continue;
      const auto* v = std::get_if<Variable>(&tp->object);
      const auto* p = std::get_if<Term>(&tp->predicate);
      if (v && v->name == var && p && p->isIri()) return p->value();
    }
    return {};
  };

  for (std::size_t fi = 0; fi < q.filters.size(); ++fi) {
    const auto& conj = q.filters[fi].conjuncts;
    std::vector<std::string> order;
    std::map<std::string, Constraint> groups;
    for (std::size_t j = 0; j < conj.size(); ++j) {
      const Comparison& cmp = conj[j];
      if (!isBoundOp(cmp.op) || !cmp.constant.isNumeric()) continue;
      auto [it, inserted] = groups.try_emplace(cmp.var.name);
      Constraint& c = it->second;
      if (inserted) {
        order.push_back(cmp.var.name);
        c.kind = ConstraintKind::NumericBound;
        c.index = fi;
        c.var = cmp.var.name;
        c.property = propertyOf(cmp.var.name);
      }
      c.conjuncts.push_back(j);
      bool isLower = cmp.op == CompareOp::Gt || cmp.op == CompareOp::Ge || cmp.op == CompareOp::Eq;
      bool isUpper = cmp.op == CompareOp::Lt || cmp.op == CompareOp::Le || cmp.op == CompareOp::Eq;
      if (isLower && (!c.lower || (cmp.constant <=> *c.lower) > 0)) c.lower = cmp.constant;
      if (isUpper && (!c.upper || (cmp.constant <=> *c.upper) < 0)) c.upper = cmp.constant;
    }
    for (const std::string& var : order) {
      Constraint& c = groups.at(var);
      c.op = c.lower && c.upper ? BoundOp::Between : (c.upper ? BoundOp::Le : BoundOp::Ge);
      out.push_back(std::move(c));
    }
  }
  return out;
}

void chooseWidenSides(std::vector<Constraint>& cs, const TripleStore& store) {
  for (Constraint& c : cs) {
    if (c.kind != ConstraintKind::NumericBound || c.op != BoundOp::Between) continue;
    c.widenLower = c.widenUpper = true;
    if (c.property.empty()) continue;
    Term pred = Term::iri(c.property);
    double lo = c.lower->numericValue();
    double hi = c.upper->numericValue();
    bool below = false;
    bool above = false;
    store.scan(nullptr, &pred, nullptr, [&](const Triple& t) {
      if (!t.object.isNumeric()) return;
      double v = t.object.numericValue();
      below = below || v < lo;
      above = above || v > hi;
    });
    if (below || above) {
      c.widenLower = below;
      c.widenUpper = above;
    }
  }
}

double widenBound(double bound, bool upper, int steps, const PenaltyTable& table) {
  double b = bound;
  for (int i = 0; i < steps; ++i) {
    double delta = table.numericStepFraction * std::fabs(b);
    b = upper ? b + delta : b - delta;
  }
  return b;
}

Relaxation makeRelaxation(const std::vector<Constraint>& cs, std::size_t constraint,
                          RelaxAction action, int steps, const PenaltyTable& table) {
  if (constraint >= cs.size()) throw ValidationError("relaxation targets a missing constraint");
  const Constraint& c = cs[constraint];
  Relaxation r{constraint, action, 0, table.dropPenalty};
  if (action == RelaxAction::Widen) {
    if (!c.widenable()) throw ValidationError("categorical constraints can only be dropped");
    if (steps < 1 || steps > table.maxWidenSteps) throw ValidationError("widen steps out of range");
    r.steps = steps;
    r.penalty = steps * (c.kind == ConstraintKind::Spatial ? table.radiusStepPenalty
                                                           : table.numericStepPenalty);
  }
  return r;
}

QueryAst applyRelaxations(const QueryAst& q, const std::vector<Constraint>& cs,
                          const std::vector<Relaxation>& rs, const PenaltyTable& table) {
  std::vector<bool> droppedPattern(q.patterns.size(), false);
  std::vector<std::optional<double>> radius(q.patterns.size());
  // filters[i].conjuncts[j] -> replacement list (empty when dropped)
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Comparison>> rewrites;
  std::set<std::size_t> seen;

  for (const Relaxation& r : rs) {
    if (r.constraint >= cs.size()) throw ValidationError("relaxation targets a missing constraint");
    if (!seen.insert(r.constraint).second)
      throw ValidationError("two relaxations target the same constraint");
    const Constraint& c = cs[r.constraint];
    bool drop = r.action == RelaxAction::Drop;
    switch (c.kind) {
      case ConstraintKind::CategoricalEq: {
        if (c.index >= q.patterns.size() || !std::holds_alternative<TriplePattern>(q.patterns[c.index]))
          throw ValidationError("constraint " + c.describe() + " is not in the query");
        if (!drop) throw ValidationError("categorical constraints can only be dropped");
        droppedPattern[c.index] = true;
        break;
      }
      case ConstraintKind::Spatial: {
        if (c.index >= q.patterns.size() || !std::holds_alternative<NearbyPattern>(q.patterns[c.index]))
          throw ValidationError("constraint " + c.describe() + " is not in the query");
        if (drop) {
          droppedPattern[c.index] = true;
        } else {
          const auto& np = std::get<NearbyPattern>(q.patterns[c.index]);
          radius[c.index] = np.radiusKm * std::pow(table.radiusStepFactor, r.steps);
        }
        break;
      }
      case ConstraintKind::NumericBound: {
        if (c.index >= q.filters.size())
          throw ValidationError("constraint " + c.describe() + " is not in the query");
        const auto& conj = q.filters[c.index].conjuncts;
        for (std::size_t j : c.conjuncts) {
          if (j >= conj.size() || conj[j].var.name != c.var)
            throw ValidationError("constraint " + c.describe() + " is not in the query");
          auto& out = rewrites[{c.index, j}];
          if (drop) continue;
          const Comparison& cmp = conj[j];
          bool between = c.op == BoundOp::Between;
          bool lowerSide = !between || c.widenLower;
          bool upperSide = !between || c.widenUpper;
          double v = cmp.constant.numericValue();
          auto lowered = [&] {
            return lowerSide ? widenedTerm(cmp.constant, widenBound(v, false, r.steps, table))
                             : cmp.constant;
          };
          auto raised = [&] {
            return upperSide ? widenedTerm(cmp.constant, widenBound(v, true, r.steps, table))
                             : cmp.constant;
          };
          switch (cmp.op) {
            case CompareOp::Lt:
            case CompareOp::Le:
              out.push_back({cmp.var, cmp.op, raised()});
              break;
            case CompareOp::Gt:
            case CompareOp::Ge:
              out.push_back({cmp.var, cmp.op, lowered()});
              break;
            case CompareOp::Eq:
              out.push_back({cmp.var, CompareOp::Ge, lowered()});
              out.push_back({cmp.var, CompareOp::Le, raised()});
              break;
            case CompareOp::Ne:
              break;
          }
        }
        break;
      }
    }
  }

  QueryAst out;
  out.prefixes = q.prefixes;
  out.select = q.select;
  for (std::size_t i = 0; i < q.patterns.size(); ++i) {
    if (droppedPattern[i]) continue;
    PatternItem item = q.patterns[i];
    if (radius[i]) std::get<NearbyPattern>(item).radiusKm = *radius[i];
    out.patterns.push_back(std::move(item));
  }
  for (std::size_t i = 0; i < q.filters.size(); ++i) {
    FilterExpr f;
    for (std::size_t j = 0; j < q.filters[i].conjuncts.size(); ++j) {
      auto it = rewrites.find({i, j});
      if (it == rewrites.end()) {
        f.conjuncts.push_back(q.filters[i].conjuncts[j]);
      } else {
        f.conjuncts.insert(f.conjuncts.end(), it->second.begin(), it->second.end());
      }
    }
    if (!f.conjuncts.empty()) out.filters.push_back(std::move(f));
  }
  return out;
}

QueryAst applyRelaxation(const QueryAst& q, const std::vector<Constraint>& cs,
                         const Relaxation& r, const PenaltyTable& table) {
  return applyRelaxations(q, cs, {r}, table);
}

namespace {

// Per constraint: 0 = untouched, 1..maxWidenSteps = widen, drop code = drop.
struct State {
  double penalty = 0.0;
  std::vector<int> codes;

  bool operator>(const State& o) const {
    if (penalty != o.penalty) return penalty > o.penalty;
    return codes > o.codes;
  }
};

}  // namespace

RelaxOutcome relaxSearch(const QueryAst& q, const TripleStore& store, const GeoIndex& geo,
                         const RelaxBudget& budget, const PenaltyTable& table) {
  if (budget.maxPenalty < 0) throw ValidationError("maxPenalty must be non-negative");
  if (budget.maxStates < 1) throw ValidationError("maxStates must be at least 1");

  RelaxOutcome outcome;
  for (const Variable& v : q.select) outcome.vars.push_back(v.name);
  outcome.constraints = classifyConstraints(q);
  chooseWidenSides(outcome.constraints, store);
  const auto& cs = outcome.constraints;
  const int dropCode = table.maxWidenSteps + 1;

  auto actionPenalty = [&](std::size_t i, int code) {
    if (code == 0) return 0.0;
    if (code == dropCode) return table.dropPenalty;
    return code * (cs[i].kind == ConstraintKind::Spatial ? table.radiusStepPenalty
                                                         : table.numericStepPenalty);
  };
  auto relaxationsOf = [&](const State& s) {
    std::vector<Relaxation> rs;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      int code = s.codes[i];
      if (code == 0) continue;
      rs.push_back(code == dropCode ? makeRelaxation(cs, i, RelaxAction::Drop, 0, table)
                                    : makeRelaxation(cs, i, RelaxAction::Widen, code, table));
    }
    return rs;
  };

  std::priority_queue<State, std::vector<State>, std::greater<>> frontier;
  std::set<std::vector<int>> queued;
  State start{0.0, std::vector<int>(cs.size(), 0)};
  frontier.push(start);
  queued.insert(start.codes);

  std::set<Row, decltype(&rowLess)> seenRows(&rowLess);
  while (!frontier.empty() && outcome.statesExplored < budget.maxStates) {
    double level = frontier.top().penalty;
    bool levelHasRows = false;
    while (!frontier.empty() && frontier.top().penalty <= level + kLevelTolerance &&
           outcome.statesExplored < budget.maxStates) {
      State s = frontier.top();
      frontier.pop();
      ++outcome.statesExplored;

      std::vector<Relaxation> applied = relaxationsOf(s);
      QueryAst relaxed = applied.empty() ? q : applyRelaxations(q, cs, applied, table);
      ResultSet rs = execute(relaxed, store, geo);
      for (Row& row : rs.rows) {
        if (!seenRows.insert(row).second) continue;
        levelHasRows = true;
        outcome.results.push_back({std::move(row), s.penalty, applied});
      }

      for (std::size_t i = 0; i < cs.size(); ++i) {
        int code = s.codes[i];
        if (code == dropCode) continue;
        std::vector<int> nexts;
        if (cs[i].widenable() && code < table.maxWidenSteps) nexts.push_back(code + 1);
        nexts.push_back(dropCode);
        for (int next : nexts) {
          State t = s;
          t.codes[i] = next;
          t.penalty = 0.0;
          for (std::size_t k = 0; k < cs.size(); ++k) t.penalty += actionPenalty(k, t.codes[k]);
          if (t.penalty > budget.maxPenalty + kLevelTolerance) continue;
          if (queued.insert(t.codes).second) frontier.push(std::move(t));
        }
      }
    }
    if (levelHasRows && !budget.allLevels) break;
  }

  std::stable_sort(outcome.results.begin(), outcome.results.end(),
                   [](const RelaxedResult& a, const RelaxedResult& b) {
                     if (std::fabs(a.penalty - b.penalty) > kLevelTolerance) return a.penalty < b.penalty;
                     return rowLess(a.row, b.row);
                   });
  outcome.exhausted = outcome.results.empty();
  return outcome;
}

}  // namespace yp
