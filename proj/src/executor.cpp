#include "yp/executor.hpp"

#include <deque>
#include <map>
#include <unordered_map>

namespace yp {

std::optional<bool> evalComparison(const Term& value, CompareOp op, const Term& constant) {
  int c = 0;
  if (value.isNumeric() && constant.isNumeric()) {
    if (value.datatype() == Datatype::Integer && constant.datatype() == Datatype::Integer) {
      auto a = value.integerValue();
      auto b = constant.integerValue();
      c = a < b ? -1 : (a > b ? 1 : 0);
    } else {
      long double a = value.numericValue();
      long double b = constant.numericValue();
      c = a < b ? -1 : (a > b ? 1 : 0);
    }
  } else if (value.isLiteral() && constant.isLiteral() && !value.isNumeric() &&
             !constant.isNumeric()) {
    int v = value.value().compare(constant.value());
    if (v == 0) v = value.lang().compare(constant.lang());
    c = v < 0 ? -1 : (v > 0 ? 1 : 0);
  } else if (value.isIri() && constant.isIri() && (op == CompareOp::Eq || op == CompareOp::Ne)) {
    c = value.value() == constant.value() ? 0 : 1;
  } else {
    return std::nullopt;
  }
  switch (op) {
    case CompareOp::Eq: return c == 0;
    case CompareOp::Ne: return c != 0;
    case CompareOp::Lt: return c < 0;
    case CompareOp::Le: return c <= 0;
    case CompareOp::Gt: return c > 0;
    case CompareOp::Ge: return c >= 0;
  }
  return std::nullopt;
}

namespace {

using Slots = std::vector<const Term*>;

// Blank nodes in patterns are non-distinguished variables; their slot names
// cannot collide with variable names because of the prefix.
std::string blankSlotName(const Term& t) { return "_:" + t.value(); }

class Evaluator {
 public:
  Evaluator(const QueryAst& q, const TripleStore& store, const GeoIndex& geo)
      : q_(q), store_(store), geo_(geo) {}

  ResultSet run() {
    for (const PatternItem& item : q_.patterns) {
      if (const auto* tp = std::get_if<TriplePattern>(&item)) {
        slotOf(tp->subject);
        slotOf(tp->predicate);
        slotOf(tp->object);
      } else {
        slotFor(std::get<NearbyPattern>(item).entity.name);
      }
    }
    for (const FilterExpr& f : q_.filters)
      for (const Comparison& c : f.conjuncts) slotFor(c.var.name);

    std::vector<const PatternItem*> order;
    for (const PatternItem& item : q_.patterns)
      if (std::holds_alternative<NearbyPattern>(item)) order.push_back(&item);
    for (const PatternItem& item : q_.patterns)
      if (std::holds_alternative<TriplePattern>(item)) order.push_back(&item);

    std::vector<bool> applied(q_.filters.size(), false);
    std::vector<Slots> rows{Slots(slots_.size(), nullptr)};
    applyFilters(rows, applied, false);
    for (const PatternItem* item : order) {
      if (rows.empty()) break;
      if (const auto* tp = std::get_if<TriplePattern>(item)) {
        rows = joinTriple(rows, *tp);
      } else {
        rows = joinNearby(rows, std::get<NearbyPattern>(*item));
      }
      applyFilters(rows, applied, false);
    }
    applyFilters(rows, applied, true);

    ResultSet out;
    std::vector<int> cols;
    for (const Variable& v : q_.select) {
      out.vars.push_back(v.name);
      auto it = slots_.find(v.name);
      cols.push_back(it == slots_.end() ? -1 : static_cast<int>(it->second));
    }
    out.rows.reserve(rows.size());
    for (const Slots& s : rows) {
      Row r;
      r.reserve(cols.size());
      for (int c : cols) {
        if (c >= 0 && s[static_cast<std::size_t>(c)]) {
          r.emplace_back(*s[static_cast<std::size_t>(c)]);
        } else {
          r.emplace_back(std::nullopt);
        }
      }
      out.rows.push_back(std::move(r));
    }
    canonicalize(out);
    return out;
  }

 private:
  std::size_t slotFor(const std::string& name) {
    auto [it, inserted] = slots_.emplace(name, slots_.size());
    return it->second;
  }

  void slotOf(const PatternSlot& s) {
    if (const auto* v = std::get_if<Variable>(&s)) {
      slotFor(v->name);
    } else if (const auto* t = std::get_if<Term>(&s); t && t->isBlank()) {
      slotFor(blankSlotName(*t));
    }
  }

  // -1: wildcard; -2: constant; otherwise a slot index.
  int slotIndex(const PatternSlot& s) const {
    if (const auto* v = std::get_if<Variable>(&s)) return static_cast<int>(slots_.at(v->name));
    if (const auto* t = std::get_if<Term>(&s)) {
      if (t->isBlank()) return static_cast<int>(slots_.at(blankSlotName(*t)));
      return -2;
    }
    return -1;
  }

  std::vector<Slots> joinTriple(const std::vector<Slots>& rows, const TriplePattern& tp) {
    const PatternSlot* parts[3] = {&tp.subject, &tp.predicate, &tp.object};
    int idx[3];
    for (int i = 0; i < 3; ++i) idx[i] = slotIndex(*parts[i]);

    std::vector<Slots> out;
    for (const Slots& row : rows) {
      const Term* bound[3];
      for (int i = 0; i < 3; ++i) {
        if (idx[i] == -2) {
          bound[i] = &std::get<Term>(*parts[i]);
        } else if (idx[i] >= 0) {
          bound[i] = row[static_cast<std::size_t>(idx[i])];
        } else {
          bound[i] = nullptr;
        }
      }
      store_.scan(bound[0], bound[1], bound[2], [&](const Triple& t) {
        const Term* vals[3] = {&t.subject, &t.predicate, &t.object};
        Slots next = row;
        for (int i = 0; i < 3; ++i) {
          if (idx[i] < 0) continue;
          auto k = static_cast<std::size_t>(idx[i]);
          if (next[k] == nullptr) {
            next[k] = vals[i];
          } else if (!(*next[k] == *vals[i])) {
            return;  // a repeated variable bound two different terms
          }
        }
        out.push_back(std::move(next));
      });
    }
    return out;
  }

  const Term* internIri(const std::string& iri) {
    auto it = interned_.find(iri);
    if (it != interned_.end()) return it->second;
    const Term* t = &owned_.emplace_back(Term::iri(iri));
    interned_.emplace(iri, t);
    return t;
  }

  std::vector<Slots> joinNearby(const std::vector<Slots>& rows, const NearbyPattern& np) {
    auto k = slots_.at(np.entity.name);
    LatLon center = LatLon::make(np.lat, np.lon);
    std::vector<Slots> out;
    std::optional<std::vector<NearbyHit>> hits;
    for (const Slots& row : rows) {
      if (row[k] != nullptr) {
        if (!row[k]->isIri()) continue;
        const LatLon* pos = geo_.position(row[k]->value());
        if (pos && haversineKm(center, *pos) <= np.radiusKm) out.push_back(row);
        continue;
      }
      if (!hits) hits = geo_.nearby(center, np.radiusKm);
      for (const NearbyHit& h : *hits) {
        Slots next = row;
        next[k] = internIri(h.iri);
        out.push_back(std::move(next));
      }
    }
    return out;
  }

  bool passes(const Slots& row, const FilterExpr& f) const {
    for (const Comparison& c : f.conjuncts) {
      const Term* v = row[slots_.at(c.var.name)];
      if (v == nullptr) return false;
      auto r = evalComparison(*v, c.op, c.constant);
      if (!r || !*r) return false;
    }
    return true;
  }

  bool ready(const Slots& row, const FilterExpr& f) const {
    for (const Comparison& c : f.conjuncts)
      if (row[slots_.at(c.var.name)] == nullptr) return false;
    return true;
  }

  // Filters run as soon as all their variables are bound; with `final` set,
  // the rest run anyway and unbound variables fail.
  void applyFilters(std::vector<Slots>& rows, std::vector<bool>& applied, bool final) const {
    for (std::size_t i = 0; i < q_.filters.size(); ++i) {
      if (applied[i]) continue;
      const FilterExpr& f = q_.filters[i];
      if (!final && (rows.empty() || !ready(rows.front(), f))) continue;
      // Bindings are positional so every row has the same bound slots.
      std::erase_if(rows, [&](const Slots& r) { return !passes(r, f); });
      applied[i] = true;
    }
  }

  const QueryAst& q_;
  const TripleStore& store_;
  const GeoIndex& geo_;
  std::map<std::string, std::size_t> slots_;
  std::deque<Term> owned_;
  std::unordered_map<std::string, const Term*> interned_;
};

}  // namespace

ResultSet execute(const QueryAst& q, const TripleStore& store, const GeoIndex& geo) {
  return Evaluator(q, store, geo).run();
}

}  // namespace yp
