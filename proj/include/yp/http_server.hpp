#pragma once

#include <memory>
#include <string>
#include <thread>

#include "yp/engine.hpp"

namespace httplib {
class Server;
}

namespace yp {

// Routes:
//   GET  /sparql?query=...          SPARQL JSON results
//   POST /sparql                    body is the query (application/sparql-query)
//                                   or a query= form field
//   POST /search                    structured query JSON
//   POST /register                  business record JSON
//   GET  /schema/{class}            form field list JSON
class HttpServer {
 public:
  explicit HttpServer(Engine& engine);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds the socket; port 0 picks a free port. Returns the bound port.
  // Throws Error when the address cannot be bound.
  int bind(const std::string& host, int port);
  int port() const { return port_; }

  // Serves until stop(). Requires bind().
  void run();
  // run() on a background thread.
  void start();
  void stop();

 private:
  Engine& engine_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = -1;
};

}  // namespace yp
