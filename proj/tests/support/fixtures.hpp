#pragma once

#include <random>
#include <string>

#include "yp/engine.hpp"
#include "yp/geo.hpp"
#include "yp/schema.hpp"
#include "yp/structured.hpp"
#include "yp/triplestore.hpp"

namespace fixture {

std::string dataPath(const std::string& file);
std::string readText(const std::string& path);

yp::Schema restaurantSchema();
yp::Gazetteer bangalore();
// The three listed restaurants with coordinates and addresses.
yp::TripleStore sampleStore();
std::unique_ptr<yp::Engine> sampleEngine();

inline const yp::LatLon kSampleCenter{12.938147, 77.609825};

// Restaurants scattered around Bangalore, about ten triples each. Roughly
// one in twenty has no coordinates.
yp::TripleStore randomStore(std::uint64_t seed, std::size_t entities, const yp::Schema& schema);

// A random request over the template space: eq filters, numeric ranges,
// near by coordinates or locality, and select lists.
yp::StructuredQuery randomStructured(std::mt19937_64& rng);

yp::Term iri(const std::string& local);  // http://localhost:8080/<local>

}  // namespace fixture
