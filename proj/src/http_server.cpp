#include "yp/http_server.hpp"

#include "httplib.h"

namespace yp {

namespace {

void send(httplib::Response& res, const HttpResponse& r) {
  res.status = r.status;
  res.set_content(r.body, r.contentType);
}

HttpResponse badRequest(int status, const std::string& message) {
  std::string body = R"({"error":)";
  body += "\"" + message + "\"}";
  return HttpResponse{status, "application/json", body};
}

}  // namespace

HttpServer::HttpServer(Engine& engine) : engine_(engine), server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;

  s.Get("/sparql", [this](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("query")) return send(res, badRequest(400, "missing query parameter"));
    send(res, engine_.sparql(req.get_param_value("query")));
  });

  s.Post("/sparql", [this](const httplib::Request& req, httplib::Response& res) {
    std::string type = req.get_header_value("Content-Type");
    if (type.rfind("application/sparql-query", 0) == 0) return send(res, engine_.sparql(req.body));
    if (type.rfind("application/x-www-form-urlencoded", 0) == 0) {
      if (!req.has_param("query")) return send(res, badRequest(400, "missing query parameter"));
      return send(res, engine_.sparql(req.get_param_value("query")));
    }
    send(res, badRequest(415, "expected application/sparql-query or a query form field"));
  });

  s.Post("/search", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, engine_.search(req.body));
  });

  s.Post("/register", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, engine_.registerRecord(req.body));
  });

  s.Get(R"(/schema/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, engine_.schemaForm(req.matches[1].str()));
  });

  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    res.set_content(R"({"error":"HTTP )" + std::to_string(res.status) + R"("})", "application/json");
  });

  // The library default sets SO_REUSEPORT, which lets a second process share
  // the port instead of failing to bind.
  s.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });

  // The query UI may be served from another origin.
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  s.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  port_ = bound;
  return bound;
}

void HttpServer::run() {
  if (port_ < 0) throw Error("server is not bound");
  server_->listen_after_bind();
}

void HttpServer::start() {
  if (port_ < 0) throw Error("server is not bound");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void HttpServer::stop() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace yp
