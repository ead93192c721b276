#include "yp/geo.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace yp {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
// Slack added to the candidate bounding box so floating-point rounding in the
// box computation can never exclude a point the exact filter would accept.
constexpr double kBoxMarginDeg = 1e-6;

std::string foldCase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

LatLon LatLon::make(double lat, double lon) {
  if (!std::isfinite(lat) || !std::isfinite(lon)) throw ValidationError("coordinates must be finite");
  if (lat < -90.0 || lat > 90.0) throw ValidationError("latitude out of range [-90, 90]");
  if (lon < -180.0 || lon > 180.0) throw ValidationError("longitude out of range [-180, 180]");
  return LatLon{lat, lon};
}

double haversineKm(const LatLon& a, const LatLon& b) {
  double phi1 = a.lat * kDegToRad;
  double phi2 = b.lat * kDegToRad;
  double dPhi = (b.lat - a.lat) * kDegToRad;
  double dLambda = (b.lon - a.lon) * kDegToRad;
  double s1 = std::sin(dPhi / 2.0);
  double s2 = std::sin(dLambda / 2.0);
  double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

GeoIndex::GeoIndex(double cellDegrees) : cell_(cellDegrees) {
  if (!(cellDegrees > 0.0) || cellDegrees > 180.0) throw ValidationError("cell size must be in (0, 180]");
  columns_ = static_cast<std::int64_t>(std::ceil(360.0 / cell_));
}

GeoIndex::CellKey GeoIndex::cellOf(const LatLon& p) const {
  auto row = static_cast<std::int64_t>(std::floor((p.lat + 90.0) / cell_));
  auto col = static_cast<std::int64_t>(std::floor((p.lon + 180.0) / cell_));
  col = ((col % columns_) + columns_) % columns_;
  return {row, col};
}

void GeoIndex::add(const std::string& iri, const LatLon& pos) {
  auto it = positions_.find(iri);
  if (it != positions_.end()) {
    auto& bucket = cells_[cellOf(it->second)];
    std::erase_if(bucket, [&](const auto& e) { return e.first == iri; });
    it->second = pos;
  } else {
    positions_.emplace(iri, pos);
  }
  cells_[cellOf(pos)].emplace_back(iri, pos);
}

const LatLon* GeoIndex::position(const std::string& iri) const {
  auto it = positions_.find(iri);
  return it == positions_.end() ? nullptr : &it->second;
}

void GeoIndex::scanCell(const CellKey& key, const LatLon& center, double radiusKm,
                        std::vector<NearbyHit>& out) const {
  auto it = cells_.find(key);
  if (it == cells_.end()) return;
  for (const auto& [iri, pos] : it->second) {
    double d = haversineKm(center, pos);
    if (d <= radiusKm) out.push_back({iri, d});
  }
}

std::vector<NearbyHit> GeoIndex::nearby(const LatLon& center, double radiusKm) const {
  if (!(radiusKm > 0.0) || !std::isfinite(radiusKm)) throw ValidationError("radius must be positive");
  std::vector<NearbyHit> out;
  if (positions_.empty()) return out;

  double delta = radiusKm / kEarthRadiusKm;  // angular radius, radians
  double deltaDeg = delta / kDegToRad;
  double latMin = center.lat - deltaDeg - kBoxMarginDeg;
  double latMax = center.lat + deltaDeg + kBoxMarginDeg;

  bool allLongitudes = latMin <= -90.0 || latMax >= 90.0 || delta >= std::numbers::pi / 2.0;
  double halfLon = 180.0;
  if (!allLongitudes) {
    double ratio = std::sin(delta) / std::cos(center.lat * kDegToRad);
    if (ratio >= 1.0) {
      allLongitudes = true;
    } else {
      halfLon = std::asin(ratio) / kDegToRad + kBoxMarginDeg;
      if (halfLon >= 180.0) allLongitudes = true;
    }
  }

  std::int64_t rowLo = static_cast<std::int64_t>(std::floor((std::max(latMin, -90.0) + 90.0) / cell_));
  std::int64_t rowHi = static_cast<std::int64_t>(std::floor((std::min(latMax, 90.0) + 90.0) / cell_));
  std::int64_t colLo = 0;
  std::int64_t colCount = columns_;
  if (!allLongitudes) {
    colLo = static_cast<std::int64_t>(std::floor((center.lon - halfLon + 180.0) / cell_));
    std::int64_t colHi = static_cast<std::int64_t>(std::floor((center.lon + halfLon + 180.0) / cell_));
    colCount = std::min(columns_, colHi - colLo + 1);
  }

  auto rowCount = rowHi - rowLo + 1;
  auto inColumns = [&](std::int64_t col) {
    if (colCount >= columns_) return true;
    std::int64_t offset = (((col - colLo) % columns_) + columns_) % columns_;
    return offset < colCount;
  };

  if (static_cast<double>(rowCount) * static_cast<double>(colCount) >
      static_cast<double>(cells_.size())) {
    // Fewer occupied cells than candidates: walk the occupied ones instead.
    for (const auto& [key, bucket] : cells_) {
      if (key.first < rowLo || key.first > rowHi || !inColumns(key.second)) continue;
      scanCell(key, center, radiusKm, out);
    }
  } else {
    for (std::int64_t row = rowLo; row <= rowHi; ++row) {
      for (std::int64_t i = 0; i < colCount; ++i) {
        std::int64_t col = (((colLo + i) % columns_) + columns_) % columns_;
        scanCell({row, col}, center, radiusKm, out);
      }
    }
  }

  std::sort(out.begin(), out.end(), [](const NearbyHit& a, const NearbyHit& b) {
    if (a.distanceKm != b.distanceKm) return a.distanceKm < b.distanceKm;
    return a.iri < b.iri;
  });
  return out;
}

GeoIndex buildIndex(const TripleStore& store, const Term& latIri, const Term& longIri) {
  GeoIndex index;
  std::map<Term, std::pair<std::vector<Term>, std::vector<Term>>> coords;
  store.scan(nullptr, &latIri, nullptr,
             [&](const Triple& t) { coords[t.subject].first.push_back(t.object); });
  store.scan(nullptr, &longIri, nullptr,
             [&](const Triple& t) { coords[t.subject].second.push_back(t.object); });

  for (const auto& [subject, values] : coords) {
    const auto& [lats, longs] = values;
    std::string who = subject.toString();
    if (!subject.isIri()) {
      index.diagnostics.push_back(who + ": only IRI subjects are indexed");
    } else if (lats.empty() || longs.empty()) {
      index.diagnostics.push_back(who + (lats.empty() ? ": long without lat" : ": lat without long"));
    } else if (lats.size() > 1 || longs.size() > 1) {
      index.diagnostics.push_back(who + ": more than one position");
    } else if (!lats[0].isNumeric() || !longs[0].isNumeric()) {
      index.diagnostics.push_back(who + ": non-numeric coordinate");
    } else {
      try {
        index.add(subject.value(), LatLon::make(lats[0].numericValue(), longs[0].numericValue()));
      } catch (const ValidationError& e) {
        index.diagnostics.push_back(who + ": " + e.what());
      }
    }
  }
  return index;
}

GeoIndex buildIndex(const TripleStore& store, const Schema& schema) {
  return buildIndex(store, schema.latIri(), schema.longIri());
}

namespace {

std::string notFoundMessage(const std::string& name, const std::vector<std::string>& suggestions) {
  std::string msg = "unknown locality '" + name + "'";
  if (!suggestions.empty()) {
    msg += "; did you mean ";
    for (std::size_t i = 0; i < suggestions.size(); ++i) {
      if (i > 0) msg += ", ";
      msg += suggestions[i];
    }
  }
  return msg;
}

bool parseCoordinate(std::string_view s, double& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

LocalityNotFound::LocalityNotFound(const std::string& name, std::vector<std::string> suggestions)
    : NotFoundError(notFoundMessage(name, suggestions)), suggestions_(std::move(suggestions)) {}

std::size_t editDistance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

Gazetteer Gazetteer::parse(std::string_view text) {
  Gazetteer g;
  std::size_t lineNo = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 3 || fields[0].empty())
      throw ParseError("expected name<TAB>lat<TAB>lon", lineNo, 0);
    double lat = 0.0;
    double lon = 0.0;
    if (!parseCoordinate(fields[1], lat) || !parseCoordinate(fields[2], lon))
      throw ParseError("malformed coordinate", lineNo, 0);
    try {
      g.add(std::string(fields[0]), LatLon::make(lat, lon));
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), lineNo, 0);
    }
    if (end == text.size()) break;
  }
  return g;
}

void Gazetteer::add(std::string name, const LatLon& centroid) {
  std::string key = foldCase(name);
  if (byKey_.count(key)) throw ValidationError("duplicate locality '" + name + "'");
  byKey_.emplace(std::move(key), Locality{std::move(name), centroid});
}

const Locality& Gazetteer::resolve(std::string_view name) const {
  std::string key = foldCase(name);
  auto it = byKey_.find(key);
  if (it != byKey_.end()) return it->second;

  std::vector<std::pair<std::size_t, std::string>> ranked;
  for (const auto& [k, loc] : byKey_) ranked.emplace_back(editDistance(key, k), loc.name);
  std::sort(ranked.begin(), ranked.end());
  std::vector<std::string> suggestions;
  for (std::size_t i = 0; i < ranked.size() && i < 3; ++i) suggestions.push_back(ranked[i].second);
  throw LocalityNotFound(std::string(name), std::move(suggestions));
}

std::vector<std::pair<std::string, double>> Gazetteer::adjacent(std::string_view name,
                                                               double maxKm) const {
  if (!(maxKm > 0.0)) throw ValidationError("maxKm must be positive");
  const Locality& origin = resolve(name);
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [key, loc] : byKey_) {
    if (&loc == &origin) continue;
    double d = haversineKm(origin.centroid, loc.centroid);
    if (d <= maxKm) out.emplace_back(loc.name, d);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first < b.first;
  });
  return out;
}

}  // namespace yp
