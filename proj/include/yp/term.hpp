#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace yp {

namespace vocab {
inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kRdfFirst = "http://www.w3.org/1999/02/22-rdf-syntax-ns#first";
inline constexpr std::string_view kRdfRest = "http://www.w3.org/1999/02/22-rdf-syntax-ns#rest";
inline constexpr std::string_view kRdfNil = "http://www.w3.org/1999/02/22-rdf-syntax-ns#nil";
inline constexpr std::string_view kXsdString = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view kXsdInteger = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view kXsdDecimal = "http://www.w3.org/2001/XMLSchema#decimal";
}  // namespace vocab

enum class TermKind : std::uint8_t { Blank, Iri, Literal };

enum class Datatype : std::uint8_t { String, Integer, Decimal };

// An RDF term: IRI, literal or blank node. Instances are always valid; the
// factory functions throw ValidationError on malformed input.
//
// Literals carry one of three datatypes. Integer lexical forms are stored in
// canonical form ("007" becomes "7"); decimal lexical forms are kept as given.
// Language tags are lower-cased, and only plain string literals may carry one.
class Term {
 public:
  static Term iri(std::string value);
  static Term blank(std::string label);
  static Term string(std::string lexical, std::string lang = {});
  static Term integer(std::int64_t value);
  static Term integer(std::string_view lexical);
  static Term decimal(std::string_view lexical);
  // Shortest fixed-notation form that round-trips to `value`.
  static Term decimal(double value);
  // Generic constructor used by parsers: the datatype IRI must be one of the
  // three supported ones (empty means xsd:string).
  static Term literal(std::string lexical, std::string_view datatypeIri, std::string lang = {});

  TermKind kind() const { return kind_; }
  bool isIri() const { return kind_ == TermKind::Iri; }
  bool isBlank() const { return kind_ == TermKind::Blank; }
  bool isLiteral() const { return kind_ == TermKind::Literal; }
  bool isNumeric() const {
    return isLiteral() && datatype_ != Datatype::String;
  }

  // IRI text, blank-node label, or literal lexical form.
  const std::string& value() const { return value_; }
  Datatype datatype() const { return datatype_; }
  std::string_view datatypeIri() const;
  const std::string& lang() const { return lang_; }

  // Only meaningful when isNumeric().
  std::int64_t integerValue() const { return integer_; }
  double numericValue() const;

  // N-Triples style rendering, e.g. <http://x>, "Veg", "5"^^<...#integer>.
  std::string toString() const;

  friend bool operator==(const Term& a, const Term& b) {
    return a.kind_ == b.kind_ && a.datatype_ == b.datatype_ && a.value_ == b.value_ &&
           a.lang_ == b.lang_;
  }
  // Total order: blank < IRI < literal. Numeric literals precede string
  // literals and compare by value (ties broken by datatype, then lexical
  // form); strings compare bytewise, then by language tag.
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  Term() = default;

  TermKind kind_ = TermKind::Iri;
  Datatype datatype_ = Datatype::String;
  std::string value_;
  std::string lang_;
  std::int64_t integer_ = 0;
  double decimal_ = 0.0;
};

bool isValidIri(std::string_view iri);

// Formats a finite double in the shortest fixed (non-exponent) notation that
// parses back to the same value.
std::string formatDecimal(double value);

}  // namespace yp
