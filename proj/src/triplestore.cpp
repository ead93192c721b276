#include "yp/triplestore.hpp"

#include <algorithm>
#include <map>

#include "yp/error.hpp"

namespace yp {

namespace {

// Lexicographic comparison of a full key (x1,x2,x3) against a partial key;
// components after the first null in the partial key compare equal.
int comparePrefix(const Term& x1, const Term& x2, const Term& x3, const Term* k1,
                  const Term* k2, const Term* k3) {
  const Term* xs[] = {&x1, &x2, &x3};
  const Term* ks[] = {k1, k2, k3};
  for (int i = 0; i < 3; ++i) {
    if (ks[i] == nullptr) return 0;
    auto c = *xs[i] <=> *ks[i];
    if (c < 0) return -1;
    if (c > 0) return 1;
  }
  return 0;
}

bool lessSpo(const Triple& x, const Triple& y) {
  if (auto c = x.subject <=> y.subject; c != 0) return c < 0;
  if (auto c = x.predicate <=> y.predicate; c != 0) return c < 0;
  return (x.object <=> y.object) < 0;
}

}  // namespace

void validateTriple(const Triple& t) {
  if (t.subject.isLiteral()) {
    throw ValidationError("triple subject must not be a literal: " + t.subject.toString());
  }
  if (!t.predicate.isIri()) {
    throw ValidationError("triple predicate must be an IRI: " + t.predicate.toString());
  }
}

bool isValidVariableName(std::string_view name) {
  if (name.empty()) return false;
  auto head = [](char c) { return c == '_' || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  if (!head(name[0])) return false;
  return std::all_of(name.begin() + 1, name.end(),
                     [&](char c) { return head(c) || (c >= '0' && c <= '9'); });
}

bool TripleStore::SpoLess::operator()(const Triple& x, const Triple& y) const {
  return lessSpo(x, y);
}
bool TripleStore::SpoLess::operator()(const Triple& x, const Key& k) const {
  return comparePrefix(x.subject, x.predicate, x.object, k.a, k.b, k.c) < 0;
}
bool TripleStore::SpoLess::operator()(const Key& k, const Triple& x) const {
  return comparePrefix(x.subject, x.predicate, x.object, k.a, k.b, k.c) > 0;
}

bool TripleStore::PosLess::operator()(const Triple* x, const Triple* y) const {
  if (auto c = x->predicate <=> y->predicate; c != 0) return c < 0;
  if (auto c = x->object <=> y->object; c != 0) return c < 0;
  return (x->subject <=> y->subject) < 0;
}
bool TripleStore::PosLess::operator()(const Triple* x, const Key& k) const {
  return comparePrefix(x->predicate, x->object, x->subject, k.a, k.b, k.c) < 0;
}
bool TripleStore::PosLess::operator()(const Key& k, const Triple* x) const {
  return comparePrefix(x->predicate, x->object, x->subject, k.a, k.b, k.c) > 0;
}

bool TripleStore::OspLess::operator()(const Triple* x, const Triple* y) const {
  if (auto c = x->object <=> y->object; c != 0) return c < 0;
  if (auto c = x->subject <=> y->subject; c != 0) return c < 0;
  return (x->predicate <=> y->predicate) < 0;
}
bool TripleStore::OspLess::operator()(const Triple* x, const Key& k) const {
  return comparePrefix(x->object, x->subject, x->predicate, k.a, k.b, k.c) < 0;
}
bool TripleStore::OspLess::operator()(const Key& k, const Triple* x) const {
  return comparePrefix(x->object, x->subject, x->predicate, k.a, k.b, k.c) > 0;
}

TripleStore::TripleStore(const TripleStore& other) : spo_(other.spo_) { rebuildSecondary(); }

TripleStore& TripleStore::operator=(const TripleStore& other) {
  if (this != &other) {
    spo_ = other.spo_;
    rebuildSecondary();
  }
  return *this;
}

void TripleStore::rebuildSecondary() {
  pos_.clear();
  osp_.clear();
  for (const Triple& t : spo_) {
    pos_.insert(&t);
    osp_.insert(&t);
  }
}

bool TripleStore::insert(const Triple& t) {
  validateTriple(t);
  auto [it, inserted] = spo_.insert(t);
  if (!inserted) return false;
  pos_.insert(&*it);
  osp_.insert(&*it);
  return true;
}

bool TripleStore::remove(const Triple& t) {
  auto it = spo_.find(t);
  if (it == spo_.end()) return false;
  pos_.erase(&*it);
  osp_.erase(&*it);
  spo_.erase(it);
  return true;
}

bool TripleStore::contains(const Triple& t) const { return spo_.count(t) != 0; }

void TripleStore::clear() {
  pos_.clear();
  osp_.clear();
  spo_.clear();
}

void TripleStore::scan(const Term* s, const Term* p, const Term* o,
                       const std::function<void(const Triple&)>& visit) const {
  if (s != nullptr && (p != nullptr || o == nullptr)) {
    auto [lo, hi] = spo_.equal_range(Key{s, p, p != nullptr ? o : nullptr});
    for (auto it = lo; it != hi; ++it) {
      if (o == nullptr || p != nullptr || it->object == *o) visit(*it);
    }
  } else if (s != nullptr) {
    // subject and object bound, predicate free
    auto [lo, hi] = osp_.equal_range(Key{o, s, nullptr});
    for (auto it = lo; it != hi; ++it) visit(**it);
  } else if (p != nullptr) {
    auto [lo, hi] = pos_.equal_range(Key{p, o, nullptr});
    for (auto it = lo; it != hi; ++it) visit(**it);
  } else if (o != nullptr) {
    auto [lo, hi] = osp_.equal_range(Key{o, nullptr, nullptr});
    for (auto it = lo; it != hi; ++it) visit(**it);
  } else {
    for (const Triple& t : spo_) visit(t);
  }
}

std::vector<Triple> TripleStore::matchPattern(const TriplePattern& p) const {
  const PatternSlot* slots[] = {&p.subject, &p.predicate, &p.object};
  const Term* bound[3] = {nullptr, nullptr, nullptr};
  // variable name -> first position it occupies
  std::map<std::string, int> firstPos;
  int sameAs[3] = {-1, -1, -1};
  for (int i = 0; i < 3; ++i) {
    if (const auto* term = std::get_if<Term>(slots[i])) {
      bound[i] = term;
    } else if (const auto* var = std::get_if<Variable>(slots[i])) {
      auto [it, fresh] = firstPos.emplace(var->name, i);
      if (!fresh) sameAs[i] = it->second;
    }
  }

  std::vector<Triple> out;
  scan(bound[0], bound[1], bound[2], [&](const Triple& t) {
    const Term* parts[] = {&t.subject, &t.predicate, &t.object};
    for (int i = 0; i < 3; ++i) {
      if (sameAs[i] >= 0 && !(*parts[i] == *parts[sameAs[i]])) return;
    }
    out.push_back(t);
  });
  std::sort(out.begin(), out.end(), lessSpo);
  return out;
}

}  // namespace yp
