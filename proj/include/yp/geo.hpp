#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "yp/error.hpp"
#include "yp/schema.hpp"
#include "yp/triplestore.hpp"

namespace yp {

inline constexpr double kEarthRadiusKm = 6371.0088;

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;

  // Throws ValidationError for non-finite or out-of-range coordinates.
  static LatLon make(double lat, double lon);

  friend bool operator==(const LatLon&, const LatLon&) = default;
};

double haversineKm(const LatLon& a, const LatLon& b);

struct NearbyHit {
  std::string iri;
  double distanceKm = 0.0;

  friend bool operator==(const NearbyHit&, const NearbyHit&) = default;
};

// Uniform lat/lon grid over entity positions.
class GeoIndex {
 public:
  explicit GeoIndex(double cellDegrees = 0.02);

  // Replaces any earlier position of the same entity.
  void add(const std::string& iri, const LatLon& pos);
  std::size_t size() const { return positions_.size(); }
  bool empty() const { return positions_.empty(); }
  const LatLon* position(const std::string& iri) const;
  double cellDegrees() const { return cell_; }

  // Entities within radiusKm of center, ascending by distance, ties by IRI.
  // Throws ValidationError unless radiusKm > 0.
  std::vector<NearbyHit> nearby(const LatLon& center, double radiusKm) const;

  // Why entities were left out during buildIndex.
  std::vector<std::string> diagnostics;

 private:
  using CellKey = std::pair<std::int64_t, std::int64_t>;
  CellKey cellOf(const LatLon& p) const;
  void scanCell(const CellKey& key, const LatLon& center, double radiusKm,
                std::vector<NearbyHit>& out) const;

  double cell_;
  std::int64_t columns_;
  std::map<std::string, LatLon> positions_;
  std::map<CellKey, std::vector<std::pair<std::string, LatLon>>> cells_;
};

// Indexes every IRI subject carrying exactly one numeric value for each of
// latIri and longIri. Other subjects with a lat or long are skipped with a
// diagnostic.
GeoIndex buildIndex(const TripleStore& store, const Term& latIri, const Term& longIri);
GeoIndex buildIndex(const TripleStore& store, const Schema& schema);

class LocalityNotFound : public NotFoundError {
 public:
  LocalityNotFound(const std::string& name, std::vector<std::string> suggestions);
  const std::vector<std::string>& suggestions() const { return suggestions_; }

 private:
  std::vector<std::string> suggestions_;
};

struct Locality {
  std::string name;
  LatLon centroid;
};

class Gazetteer {
 public:
  // Lines `name<TAB>lat<TAB>lon`; blank lines and `#` comments skipped.
  // Throws ParseError (with line) on malformed lines or duplicate names.
  static Gazetteer parse(std::string_view text);

  void add(std::string name, const LatLon& centroid);
  std::size_t size() const { return byKey_.size(); }

  // Case-insensitive lookup. Throws LocalityNotFound with the three nearest
  // names by edit distance.
  const Locality& resolve(std::string_view name) const;

  // Other localities whose centroid lies within maxKm, ascending by distance.
  std::vector<std::pair<std::string, double>> adjacent(std::string_view name, double maxKm) const;

 private:
  std::map<std::string, Locality> byKey_;
};

std::size_t editDistance(std::string_view a, std::string_view b);

}  // namespace yp
