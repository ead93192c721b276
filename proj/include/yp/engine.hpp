#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "yp/config.hpp"
#include "yp/executor.hpp"
#include "yp/federation.hpp"
#include "yp/geo.hpp"
#include "yp/ingest.hpp"
#include "yp/relax.hpp"
#include "yp/schema.hpp"

namespace yp {

// Transport-independent response: the HTTP server and the CLI both print
// `body` unchanged.
struct HttpResponse {
  int status = 200;
  std::string contentType = "application/json";
  std::string body;
};

inline constexpr std::string_view kSparqlResultsType = "application/sparql-results+json";
inline constexpr std::size_t kMaxQueryBytes = 64 * 1024;

class ServiceUnavailable : public Error {
 public:
  using Error::Error;
};

struct EngineOptions {
  PenaltyTable penalties;
  RelaxBudget budget;
  std::vector<EndpointConfig> endpoints;
  std::chrono::milliseconds writerTimeout{2000};
  std::optional<std::filesystem::path> persistPath;
};

// Store, geo index, registrar and gazetteer behind one reader/writer lock.
// Queries share the lock; registration and bulk loads take it exclusively
// and give up with ServiceUnavailable (503) after writerTimeout. Writes mark
// the geo index stale; the next query rebuilds it under the writer lock.
class Engine {
 public:
  Engine(Schema schema, Gazetteer gazetteer, EngineOptions options = {});
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  // Reads every file the config names and loads the data file.
  static std::unique_ptr<Engine> fromConfig(const ServiceConfig& cfg);

  // GET/POST /sparql
  HttpResponse sparql(std::string_view queryText);
  // POST /search
  HttpResponse search(std::string_view body);
  // POST /register
  HttpResponse registerRecord(std::string_view body);
  // GET /schema/{class}
  HttpResponse schemaForm(std::string_view className);

  std::size_t loadNTriples(std::string_view text);
  std::string exportNTriples();
  std::size_t size();
  std::size_t entityCount();

  ResultSet execute(const QueryAst& q);
  RelaxOutcome relax(const QueryAst& q, const RelaxBudget& budget);

  const Schema& schema() const { return schema_; }
  const Gazetteer& gazetteer() const { return gazetteer_; }
  const EngineOptions& options() const { return options_; }

  // Holds the writer role until the returned lock is released.
  std::unique_lock<std::shared_timed_mutex> lockForWriting();

 private:
  std::shared_lock<std::shared_timed_mutex> readLock();
  void persistLocked();

  Schema schema_;
  Gazetteer gazetteer_;
  EngineOptions options_;
  std::shared_timed_mutex mu_;
  TripleStore store_;
  GeoIndex geo_;
  bool geoStale_ = false;
  Registrar registrar_;
};

}  // namespace yp
