#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "yp/schema.hpp"
#include "yp/triplestore.hpp"

namespace yp {

// N-Triples subset: one triple per line, IRIs in angle brackets, `_:label`
// blank nodes, literals "lex", "lex"@lang or "lex"^^<datatype>, only the \"
// and \\ escapes. Blank lines and `#` comment lines are skipped.
std::vector<Triple> parseNTriples(std::string_view text);

// All-or-nothing: on a parse error nothing is inserted. Returns the number
// of triples that were not already present.
std::size_t loadNTriples(std::string_view text, TripleStore& store);

// One line per triple in store order. Throws ValidationError for literals
// the subset cannot encode (line breaks).
std::string exportNTriples(const TripleStore& store);

struct RegistrationReceipt {
  std::string iri;
  std::chrono::system_clock::time_point createdAt;
  std::uint64_t version = 0;
};

// Thrown when a record fails validation; carries every violation.
class RecordRejected : public ValidationError {
 public:
  explicit RecordRejected(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

class DuplicateRecord : public Error {
 public:
  explicit DuplicateRecord(std::string existingIri);
  const std::string& existingIri() const { return iri_; }

 private:
  std::string iri_;
};

// Mints IRIs and writes records into a store. The caller holds the store's
// writer role for the duration of each call.
class Registrar {
 public:
  using Clock = std::function<std::chrono::system_clock::time_point()>;

  explicit Registrar(const Schema& schema, Clock clock = std::chrono::system_clock::now);

  // Throws NotFoundError (unknown class), RecordRejected, DuplicateRecord.
  RegistrationReceipt registerRecord(const BusinessRecord& r, TripleStore& store);

  // Replaces every triple of `iri`. Throws NotFoundError when the store has
  // no triples for it, RecordRejected for an invalid record.
  RegistrationReceipt update(const std::string& iri, const BusinessRecord& r, TripleStore& store);

  // Namespace + class + "/" + slug(name) + "-" + 16 hex digits.
  std::string mintIri(const BusinessRecord& r, std::chrono::system_clock::time_point at);

 private:
  const Schema& schema_;
  Clock clock_;
  std::uint64_t sequence_ = 0;
  std::map<std::string, std::uint64_t> versions_;
};

std::string slugify(std::string_view name);

}  // namespace yp
