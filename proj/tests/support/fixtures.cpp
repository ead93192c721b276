#include "fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "yp/ingest.hpp"

namespace fixture {

namespace {

const char* kFoodTypes[] = {"Veg", "NonVeg", "Jain", "Vegan"};
const char* kMealTypes[] = {"Breakfast", "Lunch", "Dinner", "Snacks"};
const char* kLocalities[] = {"Adugodi",     "Koramangala", "Vijayanagar", "Gandhinagar",
                             "Jayanagar",   "Rajajinagar", "Indiranagar", "BTM Layout",
                             "Shanthinagar", "Basavanagudi"};

template <typename T, std::size_t N>
const T& pick(std::mt19937_64& rng, const T (&arr)[N]) {
  return arr[std::uniform_int_distribution<std::size_t>(0, N - 1)(rng)];
}

}  // namespace

std::string dataPath(const std::string& file) { return std::string(YP_DATA_DIR) + "/" + file; }

std::string readText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

yp::Schema restaurantSchema() { return yp::loadSchema(readText(dataPath("restaurant.schema.json"))); }

yp::Gazetteer bangalore() { return yp::Gazetteer::parse(readText(dataPath("bangalore.gazetteer.tsv"))); }

yp::TripleStore sampleStore() {
  yp::TripleStore store;
  yp::loadNTriples(readText(dataPath("restaurants.nt")), store);
  return store;
}

std::unique_ptr<yp::Engine> sampleEngine() {
  auto engine = std::make_unique<yp::Engine>(restaurantSchema(), bangalore());
  engine->loadNTriples(readText(dataPath("restaurants.nt")));
  return engine;
}

yp::Term iri(const std::string& local) { return yp::Term::iri("http://localhost:8080/" + local); }

yp::TripleStore randomStore(std::uint64_t seed, std::size_t entities, const yp::Schema& schema) {
  std::mt19937_64 rng(seed);
  yp::TripleStore store;
  std::uniform_real_distribution<double> lat(12.85, 13.10);
  std::uniform_real_distribution<double> lon(77.45, 77.75);
  std::uniform_int_distribution<int> cost(10, 400);
  std::uniform_int_distribution<int> coin(0, 19);
  for (std::size_t i = 0; i < entities; ++i) {
    yp::BusinessRecord r;
    r.className = "Restaurant";
    std::string name = "R" + std::to_string(i);
    r.values["name"] = {name};
    r.values["cost"] = {std::to_string(cost(rng))};
    r.values["foodtype"] = {pick(rng, kFoodTypes)};
    std::string meal1 = pick(rng, kMealTypes);
    std::string meal2 = pick(rng, kMealTypes);
    r.values["mealtype"] = {meal1};
    if (meal2 != meal1 && coin(rng) < 6) r.values["mealtype"].push_back(meal2);
    std::string loc1 = pick(rng, kLocalities);
    r.values["location"] = {loc1};
    r.values["address"] = {std::to_string(i) + " Main Road, " + loc1};
    if (coin(rng) != 0) r.values["geo"] = {yp::formatDecimal(lat(rng)) + "," + yp::formatDecimal(lon(rng))};
    for (const yp::Triple& t : yp::recordToTriples(r, iri("Restaurant/" + name), schema)) store.insert(t);
  }
  return store;
}

yp::StructuredQuery randomStructured(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d100(0, 99);
  yp::StructuredQuery sq;
  sq.className = "Restaurant";
  if (d100(rng) < 50) sq.filters["foodtype"].eq = yp::Term::string(pick(rng, kFoodTypes));
  if (d100(rng) < 40) sq.filters["mealtype"].eq = yp::Term::string(pick(rng, kMealTypes));
  if (d100(rng) < 20) sq.filters["location"].eq = yp::Term::string(pick(rng, kLocalities));
  int costMode = d100(rng);
  std::uniform_int_distribution<int> cost(5, 400);
  if (costMode < 20) {
    sq.filters["cost"].max = yp::Term::integer(cost(rng));
  } else if (costMode < 35) {
    sq.filters["cost"].min = yp::Term::integer(cost(rng));
  } else if (costMode < 50) {
    int a = cost(rng);
    int b = cost(rng);
    sq.filters["cost"].min = yp::Term::integer(std::min(a, b));
    sq.filters["cost"].max = yp::Term::integer(std::max(a, b));
  } else if (costMode < 55) {
    sq.filters["cost"].eq = yp::Term::integer(cost(rng));
  }
  int nearMode = d100(rng);
  if (nearMode < 30) {
    yp::NearSpec n;
    n.lat = std::uniform_real_distribution<double>(12.85, 13.10)(rng);
    n.lon = std::uniform_real_distribution<double>(77.45, 77.75)(rng);
    n.radiusKm = std::uniform_real_distribution<double>(0.3, 6.0)(rng);
    sq.near = n;
  } else if (nearMode < 45) {
    yp::NearSpec n;
    n.locality = pick(rng, kLocalities);
    n.radiusKm = std::uniform_real_distribution<double>(0.5, 4.0)(rng);
    sq.near = n;
  }
  int selectMode = d100(rng);
  if (selectMode < 20) {
    sq.select = std::vector<std::string>{"name", "cost"};
  } else if (selectMode < 30) {
    sq.select = std::vector<std::string>{"address", "mealtype", "name"};
  }
  return sq;
}

}  // namespace fixture
