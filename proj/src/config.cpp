#include "yp/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace yp {

using nlohmann::json;

namespace {

std::vector<EndpointConfig> endpointsFrom(const json& arr) {
  if (!arr.is_array()) throw ConfigError("endpoints must be a list");
  std::vector<EndpointConfig> out;
  for (const json& e : arr) {
    if (!e.is_object()) throw ConfigError("endpoint entries must be objects");
    EndpointConfig ep;
    for (auto it = e.begin(); it != e.end(); ++it) {
      const std::string& k = it.key();
      if (k == "name" && it->is_string()) {
        ep.name = it->get<std::string>();
      } else if (k == "url" && it->is_string()) {
        ep.url = it->get<std::string>();
      } else if (k == "timeout_ms" && it->is_number_integer()) {
        ep.timeoutMs = it->get<int>();
      } else if (k == "classes" && it->is_array()) {
        for (const json& c : *it) {
          if (!c.is_string()) throw ConfigError("endpoint classes must be strings");
          ep.classes.push_back(c.get<std::string>());
        }
      } else {
        throw ConfigError("endpoint: unknown or mistyped key '" + k + "'");
      }
    }
    out.push_back(std::move(ep));
  }
  try {
    validateEndpoints(out);
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

int parseInt(const char* text, const char* name) {
  std::string_view s(text);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(std::string(name) + " must be an integer");
  return v;
}

}  // namespace

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFileAtomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<EndpointConfig> parseEndpointsJson(std::string_view text) {
  try {
    return endpointsFrom(json::parse(text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("endpoints: ") + e.what());
  }
}

ServiceConfig parseConfig(std::string_view text, const std::filesystem::path& baseDir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  ServiceConfig cfg;
  auto str = [&](const json& v, const std::string& key) {
    if (!v.is_string()) throw ConfigError(key + " must be a string");
    return v.get<std::string>();
  };
  auto integer = [&](const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ConfigError(key + " must be an integer");
    return v.get<long long>();
  };

  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& k = it.key();
    const json& v = *it;
    if (k == "schema") {
      cfg.schemaPath = resolve(baseDir, str(v, k));
    } else if (k == "data") {
      cfg.dataPath = resolve(baseDir, str(v, k));
    } else if (k == "gazetteer") {
      cfg.gazetteerPath = resolve(baseDir, str(v, k));
    } else if (k == "penalties") {
      cfg.penaltiesPath = resolve(baseDir, str(v, k));
    } else if (k == "host") {
      cfg.host = str(v, k);
    } else if (k == "port") {
      cfg.port = static_cast<int>(integer(v, k));
    } else if (k == "writer_timeout_ms") {
      cfg.writerTimeoutMs = static_cast<int>(integer(v, k));
    } else if (k == "persist") {
      if (!v.is_boolean()) throw ConfigError("persist must be a boolean");
      cfg.persist = v.get<bool>();
    } else if (k == "relax") {
      if (!v.is_object()) throw ConfigError("relax must be an object");
      for (auto r = v.begin(); r != v.end(); ++r) {
        if (r.key() == "max_penalty" && r->is_number()) {
          cfg.budget.maxPenalty = r->get<double>();
        } else if (r.key() == "max_states" && r->is_number_integer() && r->get<long long>() >= 1) {
          cfg.budget.maxStates = r->get<std::size_t>();
        } else if (r.key() == "all_levels" && r->is_boolean()) {
          cfg.budget.allLevels = r->get<bool>();
        } else {
          throw ConfigError("relax: unknown or invalid key '" + r.key() + "'");
        }
      }
      if (cfg.budget.maxPenalty < 0) throw ConfigError("relax.max_penalty must be non-negative");
    } else if (k == "endpoints") {
      if (v.is_string()) {
        cfg.endpoints = parseEndpointsJson(readFile(resolve(baseDir, v.get<std::string>())));
      } else {
        cfg.endpoints = endpointsFrom(v);
      }
    } else {
      throw ConfigError("unknown config key '" + k + "'");
    }
  }
  if (cfg.schemaPath.empty()) throw ConfigError("config must name a schema file");
  if (cfg.port < 0 || cfg.port > 65535) throw ConfigError("port must be in [0, 65535]");
  if (cfg.writerTimeoutMs <= 0) throw ConfigError("writer_timeout_ms must be positive");
  if (cfg.persist && cfg.dataPath.empty()) throw ConfigError("persist requires a data file");
  return cfg;
}

ServiceConfig loadConfig(const std::filesystem::path& path) {
  return parseConfig(readFile(path), path.parent_path());
}

void applyEnvOverrides(ServiceConfig& cfg, const EnvLookup& getenv) {
  if (const char* v = getenv("YP_SCHEMA")) cfg.schemaPath = v;
  if (const char* v = getenv("YP_DATA")) cfg.dataPath = v;
  if (const char* v = getenv("YP_GAZETTEER")) cfg.gazetteerPath = v;
  if (const char* v = getenv("YP_PENALTIES")) cfg.penaltiesPath = v;
  if (const char* v = getenv("YP_HOST")) cfg.host = v;
  if (const char* v = getenv("YP_PORT")) {
    cfg.port = parseInt(v, "YP_PORT");
    if (cfg.port < 0 || cfg.port > 65535) throw ConfigError("YP_PORT must be in [0, 65535]");
  }
  if (const char* v = getenv("YP_WRITER_TIMEOUT_MS")) {
    cfg.writerTimeoutMs = parseInt(v, "YP_WRITER_TIMEOUT_MS");
    if (cfg.writerTimeoutMs <= 0) throw ConfigError("YP_WRITER_TIMEOUT_MS must be positive");
  }
}

}  // namespace yp
