// yp: load data, run queries and serve the HTTP API.
//
// Exit codes: 0 ok, 1 usage or empty query, 2 config/data/query error,
// 3 runtime failure (including a port that cannot be bound).

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "yp/config.hpp"
#include "yp/engine.hpp"
#include "yp/http_server.hpp"
#include "yp/ingest.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kDataError = 2, kRuntimeError = 3 };

yp::ServiceConfig configFrom(const std::string& path) {
  yp::ServiceConfig cfg = yp::loadConfig(path);
  yp::applyEnvOverrides(cfg, [](const char* name) { return std::getenv(name); });
  return cfg;
}

std::size_t countEntities(const yp::TripleStore& store) {
  yp::Term rdfType = yp::Term::iri(std::string(yp::vocab::kRdfType));
  std::set<yp::Term> subjects;
  store.scan(nullptr, &rdfType, nullptr, [&](const yp::Triple& t) { subjects.insert(t.subject); });
  return subjects.size();
}

int printResponse(const yp::HttpResponse& r) {
  if (r.status >= 200 && r.status < 300) {
    std::cout << r.body << "\n";
    return kOk;
  }
  std::cerr << "error (HTTP " << r.status << "): " << r.body << "\n";
  return r.status >= 500 ? kRuntimeError : kDataError;
}

int serve(const std::string& configPath) {
  yp::ServiceConfig cfg = configFrom(configPath);
  auto engine = yp::Engine::fromConfig(cfg);

  // Block the stop signals before any thread starts so only sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  yp::HttpServer server(*engine);
  int port = 0;
  try {
    port = server.bind(cfg.host, cfg.port);
  } catch (const yp::Error& e) {
    std::cerr << "yp: " << e.what() << "\n";
    return kRuntimeError;
  }
  server.start();
  std::cout << "listening on http://" << cfg.host << ":" << port << " (" << engine->size()
            << " triples)" << std::endl;
  int sig = 0;
  sigwait(&signals, &sig);
  server.stop();
  return kOk;
}

int query(const std::string& configPath, const std::string& file, const std::string& structured) {
  if (file.empty() == structured.empty()) {
    std::cerr << "yp: give exactly one of --file or --structured\n";
    return kUsage;
  }
  std::string text;
  try {
    if (!file.empty()) {
      text = yp::readFile(file);
    } else {
      text = structured.rfind('@', 0) == 0 ? yp::readFile(structured.substr(1)) : structured;
    }
  } catch (const yp::ConfigError& e) {
    std::cerr << "yp: " << e.what() << "\n";
    return kDataError;
  }
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    std::cerr << "yp: empty query\n";
    return kUsage;
  }
  auto engine = yp::Engine::fromConfig(configFrom(configPath));
  return printResponse(file.empty() ? engine->search(text) : engine->sparql(text));
}

int load(const std::string& dataFile, const std::string& configPath) {
  std::string text = yp::readFile(dataFile);
  yp::TripleStore store;
  yp::loadNTriples(text, store);
  if (!configPath.empty()) {
    yp::ServiceConfig cfg = configFrom(configPath);
    if (cfg.dataPath.empty()) throw yp::ConfigError("config names no data file to load into");
    auto engine = yp::Engine::fromConfig(cfg);
    engine->loadNTriples(text);
    yp::writeFileAtomic(cfg.dataPath, engine->exportNTriples());
    std::cout << engine->entityCount() << " entities, " << engine->size() << " triples\n";
    return kOk;
  }
  std::cout << countEntities(store) << " entities, " << store.size() << " triples\n";
  return kOk;
}

int exportData(const std::string& outFile, const std::string& configPath) {
  auto engine = yp::Engine::fromConfig(configFrom(configPath));
  yp::writeFileAtomic(outFile, engine->exportNTriples());
  std::cout << engine->entityCount() << " entities, " << engine->size() << " triples\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic yellow-pages engine"};
  app.require_subcommand(1);

  std::string configPath;
  std::string file;
  std::string structured;
  std::string dataFile;
  std::string outFile;

  auto* serveCmd = app.add_subcommand("serve", "Serve the HTTP API");
  serveCmd->add_option("--config", configPath, "Config file")->required();

  auto* queryCmd = app.add_subcommand("query", "Run one query and print the response body");
  queryCmd->add_option("--config", configPath, "Config file")->required();
  queryCmd->add_option("--file", file, "SPARQL query file");
  queryCmd->add_option("--structured", structured, "Structured query JSON, or @file");

  auto* loadCmd = app.add_subcommand("load", "Parse an N-Triples file and report counts");
  loadCmd->add_option("file", dataFile, "N-Triples file")->required();
  loadCmd->add_option("--config", configPath, "Also merge into the config's data file");

  auto* exportCmd = app.add_subcommand("export", "Write the store as N-Triples");
  exportCmd->add_option("out", outFile, "Output file")->required();
  exportCmd->add_option("--config", configPath, "Config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*serveCmd) return serve(configPath);
    if (*queryCmd) return query(configPath, file, structured);
    if (*loadCmd) return load(dataFile, configPath);
    if (*exportCmd) return exportData(outFile, configPath);
  } catch (const yp::ConfigError& e) {
    std::cerr << "yp: " << e.what() << "\n";
    return kDataError;
  } catch (const yp::ParseError& e) {
    std::cerr << "yp: " << e.what() << "\n";
    return kDataError;
  } catch (const yp::ValidationError& e) {
    std::cerr << "yp: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "yp: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kUsage;
}
