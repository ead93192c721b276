#pragma once

#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "yp/term.hpp"

namespace yp {

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

// Throws ValidationError unless the subject is an IRI or blank node and the
// predicate is an IRI.
void validateTriple(const Triple& t);

struct Variable {
  std::string name;

  friend bool operator==(const Variable&, const Variable&) = default;
};

// Matches any term without binding it.
struct Wildcard {
  friend bool operator==(Wildcard, Wildcard) { return true; }
};

bool isValidVariableName(std::string_view name);

using PatternSlot = std::variant<Wildcard, Term, Variable>;

// A triple pattern. A variable that appears in more than one position must
// bind the same term in each.
struct TriplePattern {
  PatternSlot subject;
  PatternSlot predicate;
  PatternSlot object;

  friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
};

// Set of triples kept in three sorted permutations (SPO, POS, OSP) so that
// every pattern with at least one bound position resolves to a prefix range.
//
// The store does no locking of its own: callers provide the many-readers or
// one-writer discipline (see Engine).
class TripleStore {
 public:
  TripleStore() = default;
  TripleStore(const TripleStore& other);
  TripleStore& operator=(const TripleStore& other);
  TripleStore(TripleStore&&) noexcept = default;
  TripleStore& operator=(TripleStore&&) noexcept = default;

  // Returns false if the triple was already present.
  bool insert(const Triple& t);
  bool remove(const Triple& t);
  bool contains(const Triple& t) const;
  std::size_t size() const { return spo_.size(); }
  bool empty() const { return spo_.empty(); }
  void clear();

  // Triples unifying with `p`, sorted by subject, predicate, object.
  std::vector<Triple> matchPattern(const TriplePattern& p) const;

  // Visits every triple whose bound positions equal the given terms (null
  // means unbound). Visit order follows whichever index served the lookup.
  void scan(const Term* s, const Term* p, const Term* o,
            const std::function<void(const Triple&)>& visit) const;

  // All triples in SPO order.
  std::vector<Triple> triples() const { return {spo_.begin(), spo_.end()}; }
  auto begin() const { return spo_.begin(); }
  auto end() const { return spo_.end(); }

  friend bool operator==(const TripleStore& a, const TripleStore& b) { return a.spo_ == b.spo_; }

 private:
  // Partial key in index order; null components match anything.
  struct Key {
    const Term* a;
    const Term* b;
    const Term* c;
  };

  struct SpoLess {
    using is_transparent = void;
    bool operator()(const Triple& x, const Triple& y) const;
    bool operator()(const Triple& x, const Key& k) const;
    bool operator()(const Key& k, const Triple& x) const;
  };
  struct PosLess {
    using is_transparent = void;
    bool operator()(const Triple* x, const Triple* y) const;
    bool operator()(const Triple* x, const Key& k) const;
    bool operator()(const Key& k, const Triple* x) const;
  };
  struct OspLess {
    using is_transparent = void;
    bool operator()(const Triple* x, const Triple* y) const;
    bool operator()(const Triple* x, const Key& k) const;
    bool operator()(const Key& k, const Triple* x) const;
  };

  void rebuildSecondary();

  std::set<Triple, SpoLess> spo_;
  std::set<const Triple*, PosLess> pos_;
  std::set<const Triple*, OspLess> osp_;
};

}  // namespace yp
