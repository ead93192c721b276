#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>

#include "yp/ingest.hpp"

namespace yp {

namespace {

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string violationSummary(const std::vector<Violation>& vs) {
  std::string msg = "record rejected:";
  for (const Violation& v : vs) msg += " " + v.property + ": " + v.message + ";";
  if (!vs.empty()) msg.pop_back();
  return msg;
}

const std::vector<std::string>* valuesOf(const BusinessRecord& r, const std::string& property) {
  auto it = r.values.find(property);
  return it == r.values.end() ? nullptr : &it->second;
}

bool hasSubject(const TripleStore& store, const Term& subject) {
  bool found = false;
  store.scan(&subject, nullptr, nullptr, [&](const Triple&) { found = true; });
  return found;
}

}  // namespace

RecordRejected::RecordRejected(std::vector<Violation> violations)
    : ValidationError(violationSummary(violations)), violations_(std::move(violations)) {}

DuplicateRecord::DuplicateRecord(std::string existingIri)
    : Error("an identical listing is already registered as <" + existingIri + ">"),
      iri_(std::move(existingIri)) {}

std::string slugify(std::string_view name) {
  std::string out;
  for (unsigned char c : name) {
    if (std::isalnum(c)) {
      out.push_back(static_cast<char>(std::tolower(c)));
    } else if (!out.empty() && out.back() != '-') {
      out.push_back('-');
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out.empty() ? "entity" : out;
}

Registrar::Registrar(const Schema& schema, Clock clock) : schema_(schema), clock_(std::move(clock)) {}

std::string Registrar::mintIri(const BusinessRecord& r, std::chrono::system_clock::time_point at) {
  const ClassDef* cls = schema_.findClass(r.className);
  if (cls == nullptr) throw NotFoundError("unknown class '" + r.className + "'");
  const auto* names = valuesOf(r, cls->display);
  std::string name = names && !names->empty() ? names->front() : std::string();

  auto nanos = std::chrono::duration_cast<std::chrono::nanoseconds>(at.time_since_epoch()).count();
  std::string seed = name;
  seed.push_back('\0');
  seed += std::to_string(nanos);
  seed.push_back('\0');
  seed += std::to_string(sequence_++);
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(seed)));
  return schema_.ns() + r.className + "/" + slugify(name) + "-" + hex;
}

RegistrationReceipt Registrar::registerRecord(const BusinessRecord& r, TripleStore& store) {
  auto violations = validateRecord(r, schema_);
  if (!violations.empty()) throw RecordRejected(std::move(violations));
  const ClassDef& cls = *schema_.findClass(r.className);

  // Duplicate check on (class, display name, address), entered by name.
  Term rdfType = Term::iri(std::string(vocab::kRdfType));
  Term classIri = schema_.classIri(r.className);
  Term displayIri = schema_.propertyIri(cls.display);
  Term addressIri = schema_.propertyIri("address");
  const auto* names = valuesOf(r, cls.display);
  const auto* addresses = cls.find("address") ? valuesOf(r, "address") : nullptr;
  std::vector<std::string> wantAddresses = addresses ? *addresses : std::vector<std::string>{};
  std::sort(wantAddresses.begin(), wantAddresses.end());
  std::set<Term> candidates;
  if (names) {
    for (const std::string& n : *names) {
      Term literal = Term::string(n);
      store.scan(nullptr, &displayIri, &literal,
                 [&](const Triple& t) { candidates.insert(t.subject); });
    }
  }
  for (const Term& subject : candidates) {
    if (!store.contains({subject, rdfType, classIri})) continue;
    std::vector<std::string> existingNames;
    std::vector<std::string> existingAddresses;
    store.scan(&subject, &displayIri, nullptr,
               [&](const Triple& t) { existingNames.push_back(t.object.value()); });
    store.scan(&subject, &addressIri, nullptr,
               [&](const Triple& t) { existingAddresses.push_back(t.object.value()); });
    std::vector<std::string> wantNames = *names;
    std::sort(existingNames.begin(), existingNames.end());
    std::sort(existingAddresses.begin(), existingAddresses.end());
    std::sort(wantNames.begin(), wantNames.end());
    if (existingNames == wantNames && existingAddresses == wantAddresses)
      throw DuplicateRecord(subject.value());
  }

  auto now = clock_();
  std::string iri = mintIri(r, now);
  while (hasSubject(store, Term::iri(iri))) iri = mintIri(r, now);

  for (const Triple& t : recordToTriples(r, Term::iri(iri), schema_)) store.insert(t);
  versions_[iri] = 1;
  return RegistrationReceipt{iri, now, 1};
}

RegistrationReceipt Registrar::update(const std::string& iri, const BusinessRecord& r,
                                      TripleStore& store) {
  Term subject = Term::iri(iri);
  if (!hasSubject(store, subject)) throw NotFoundError("no entity <" + iri + ">");
  auto violations = validateRecord(r, schema_);
  if (!violations.empty()) throw RecordRejected(std::move(violations));
  std::vector<Triple> fresh = recordToTriples(r, subject, schema_);

  std::vector<Triple> old;
  store.scan(&subject, nullptr, nullptr, [&](const Triple& t) { old.push_back(t); });
  for (const Triple& t : old) store.remove(t);
  for (const Triple& t : fresh) store.insert(t);

  auto [it, inserted] = versions_.try_emplace(iri, 1);
  it->second += 1;
  return RegistrationReceipt{iri, clock_(), it->second};
}

}  // namespace yp
