#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "yp/error.hpp"
#include "yp/federation.hpp"
#include "yp/relax.hpp"

namespace yp {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ServiceConfig {
  std::filesystem::path schemaPath;
  std::filesystem::path dataPath;       // optional
  std::filesystem::path gazetteerPath;  // optional
  std::filesystem::path penaltiesPath;  // optional
  std::string host = "127.0.0.1";
  int port = 8080;
  int writerTimeoutMs = 2000;
  // Write the whole store back to dataPath after every registration.
  bool persist = false;
  RelaxBudget budget;
  std::vector<EndpointConfig> endpoints;
};

// Unified JSON config file:
//   {"schema": "restaurant.schema.json", "data": "restaurants.nt",
//    "gazetteer": "...tsv", "penalties": "penalties.conf",
//    "host": "127.0.0.1", "port": 8080, "writer_timeout_ms": 2000,
//    "persist": false, "relax": {"max_penalty": 40, "max_states": 1024},
//    "endpoints": [{"name", "url", "timeout_ms", "classes"}] | "endpoints.json"}
// Relative paths resolve against the config file's directory. Unknown keys
// are rejected. Throws ConfigError.
ServiceConfig parseConfig(std::string_view text, const std::filesystem::path& baseDir);
ServiceConfig loadConfig(const std::filesystem::path& path);

// Environment overrides: YP_SCHEMA, YP_DATA, YP_GAZETTEER, YP_PENALTIES,
// YP_HOST, YP_PORT, YP_WRITER_TIMEOUT_MS.
using EnvLookup = std::function<const char*(const char*)>;
void applyEnvOverrides(ServiceConfig& cfg, const EnvLookup& getenv);

std::vector<EndpointConfig> parseEndpointsJson(std::string_view text);

std::string readFile(const std::filesystem::path& path);
// Writes via a temporary file and rename.
void writeFileAtomic(const std::filesystem::path& path, std::string_view content);

}  // namespace yp
