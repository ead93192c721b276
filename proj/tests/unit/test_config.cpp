#include <filesystem>
#include <map>

#include "doctest.h"
#include "fixtures.hpp"
#include "yp/config.hpp"
#include "yp/engine.hpp"

using namespace yp;
namespace fs = std::filesystem;

TEST_SUITE("config") {
  TEST_CASE("the shipped config loads") {
    ServiceConfig cfg = loadConfig(fixture::dataPath("config.json"));
    CHECK(cfg.schemaPath == fs::path(fixture::dataPath("restaurant.schema.json")));
    CHECK(cfg.dataPath == fs::path(fixture::dataPath("restaurants.nt")));
    CHECK(cfg.port == 8080);
    CHECK(cfg.host == "127.0.0.1");
    CHECK(cfg.budget.maxPenalty == 40.0);
    CHECK(cfg.budget.maxStates == 1024);
    CHECK(cfg.endpoints.empty());
    auto engine = Engine::fromConfig(cfg);
    CHECK(engine->size() == 28);
    CHECK(engine->entityCount() == 3);
  }

  TEST_CASE("keys and endpoints") {
    ServiceConfig cfg = parseConfig(R"({"schema":"s.json","port":9000,"writer_timeout_ms":50,
      "relax":{"max_penalty":12.5,"max_states":9,"all_levels":true},
      "endpoints":[{"name":"a","url":"http://127.0.0.1:9001/sparql","timeout_ms":700,"classes":["Restaurant"]}]})",
                                    "/base");
    CHECK(cfg.schemaPath == fs::path("/base/s.json"));
    CHECK(cfg.port == 9000);
    CHECK(cfg.writerTimeoutMs == 50);
    CHECK(cfg.budget.maxPenalty == 12.5);
    CHECK(cfg.budget.maxStates == 9);
    CHECK(cfg.budget.allLevels);
    REQUIRE(cfg.endpoints.size() == 1);
    CHECK(cfg.endpoints[0].timeoutMs == 700);
    CHECK(cfg.endpoints[0].classes == std::vector<std::string>{"Restaurant"});

    CHECK_THROWS_AS(parseConfig(R"({"port":1})", "/"), ConfigError);
    CHECK_THROWS_AS(parseConfig(R"({"schema":"s","colour":1})", "/"), ConfigError);
    CHECK_THROWS_AS(parseConfig(R"({"schema":"s","port":70000})", "/"), ConfigError);
    CHECK_THROWS_AS(parseConfig(R"({"schema":"s","persist":true})", "/"), ConfigError);
    CHECK_THROWS_AS(parseConfig("{", "/"), ConfigError);
    CHECK_THROWS_AS(parseEndpointsJson(R"([{"name":"a","url":"x","bogus":1}])"), ConfigError);
  }

  TEST_CASE("environment overrides") {
    ServiceConfig cfg = parseConfig(R"({"schema":"s.json"})", "/base");
    std::map<std::string, std::string> env = {{"YP_PORT", "8181"}, {"YP_HOST", "0.0.0.0"},
                                              {"YP_DATA", "/tmp/d.nt"}, {"YP_WRITER_TIMEOUT_MS", "25"}};
    applyEnvOverrides(cfg, [&](const char* name) -> const char* {
      auto it = env.find(name);
      return it == env.end() ? nullptr : it->second.c_str();
    });
    CHECK(cfg.port == 8181);
    CHECK(cfg.host == "0.0.0.0");
    CHECK(cfg.dataPath == fs::path("/tmp/d.nt"));
    CHECK(cfg.writerTimeoutMs == 25);
    env = {{"YP_PORT", "eighty"}};
    CHECK_THROWS_AS(applyEnvOverrides(cfg, [&](const char* name) -> const char* {
                      auto it = env.find(name);
                      return it == env.end() ? nullptr : it->second.c_str();
                    }),
                    ConfigError);
  }

  TEST_CASE("missing files surface as config errors") {
    ServiceConfig cfg = parseConfig(R"({"schema":"missing.schema.json"})", fs::temp_directory_path());
    CHECK_THROWS_AS(Engine::fromConfig(cfg), ConfigError);
    CHECK_THROWS_AS(loadConfig("/nonexistent/config.json"), ConfigError);
  }

  TEST_CASE("atomic write replaces the file") {
    fs::path p = fs::temp_directory_path() / "yp_atomic_test.txt";
    writeFileAtomic(p, "one");
    writeFileAtomic(p, "two");
    CHECK(readFile(p) == "two");
    CHECK_FALSE(fs::exists(p.string() + ".tmp"));
    fs::remove(p);
  }
}
