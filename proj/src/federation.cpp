#include "yp/federation.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <set>
#include <thread>

#include "httplib.h"
#include "yp/error.hpp"
#include "yp/query.hpp"

namespace yp {

namespace {

struct ParsedUrl {
  std::string base;  // scheme://host:port
  std::string path;
};

std::optional<ParsedUrl> splitUrl(const std::string& url) {
  constexpr std::string_view scheme = "http://";
  if (url.rfind(scheme, 0) != 0) return std::nullopt;
  auto slash = url.find('/', scheme.size());
  std::string authority = url.substr(scheme.size(), slash == std::string::npos ? slash : slash - scheme.size());
  if (authority.empty()) return std::nullopt;
  auto colon = authority.rfind(':');
  if (colon != std::string::npos) {
    std::string port = authority.substr(colon + 1);
    if (colon == 0 || port.empty() || port.size() > 5 ||
        !std::all_of(port.begin(), port.end(), [](char c) { return c >= '0' && c <= '9'; }))
      return std::nullopt;
  }
  return ParsedUrl{std::string(scheme) + authority, slash == std::string::npos ? "/" : url.substr(slash)};
}

// Shared between fanout and its workers; workers that miss the deadline
// finish against this state after fanout has returned.
struct Pending {
  std::mutex mu;
  std::condition_variable cv;
  std::vector<std::optional<std::pair<EndpointStatus, ResultSet>>> answers;
  std::size_t remaining = 0;
};

std::pair<EndpointStatus, ResultSet> ask(const EndpointConfig& ep, const std::string& queryText,
                                         const std::vector<std::string>& expectedVars) {
  EndpointStatus status;
  ResultSet rs;
  auto url = splitUrl(ep.url);
  httplib::Client client(url->base);
  auto timeout = std::chrono::milliseconds(ep.timeoutMs);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  std::string target = url->path + "?query=" + httplib::detail::encode_query_param(queryText);
  auto res = client.Get(target, {{"Accept", "application/sparql-results+json"}});
  if (!res) {
    auto err = res.error();
    status.state = err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout
                       ? EndpointState::Timeout
                       : EndpointState::Unreachable;
    status.message = httplib::to_string(err);
    return {status, rs};
  }
  status.httpStatus = res->status;
  if (res->status != 200) {
    status.state = EndpointState::HttpError;
    status.message = "HTTP " + std::to_string(res->status);
    return {status, rs};
  }
  try {
    rs = fromSparqlJson(res->body);
  } catch (const ParseError& e) {
    status.state = EndpointState::ParseError;
    status.message = e.what();
    return {status, ResultSet{}};
  }
  if (rs.vars != expectedVars) {
    status.state = EndpointState::ParseError;
    status.message = "response variables do not match the query";
    return {status, ResultSet{}};
  }
  status.rows = rs.rows.size();
  return {status, rs};
}

}  // namespace

std::string_view endpointStateName(EndpointState s) {
  switch (s) {
    case EndpointState::Ok: return "ok";
    case EndpointState::Timeout: return "timeout";
    case EndpointState::HttpError: return "httpError";
    case EndpointState::ParseError: return "parseError";
    case EndpointState::Unreachable: return "unreachable";
  }
  return "unknown";
}

void validateEndpoints(const std::vector<EndpointConfig>& endpoints) {
  std::set<std::string> names;
  for (const EndpointConfig& ep : endpoints) {
    if (ep.name.empty()) throw ValidationError("endpoint name must not be empty");
    if (!names.insert(ep.name).second) throw ValidationError("duplicate endpoint '" + ep.name + "'");
    if (ep.timeoutMs <= 0) throw ValidationError("endpoint '" + ep.name + "': timeout must be positive");
    if (!splitUrl(ep.url)) throw ValidationError("endpoint '" + ep.name + "': bad URL '" + ep.url + "'");
  }
}

std::vector<EndpointConfig> routeEndpoints(const std::vector<EndpointConfig>& endpoints,
                                           const std::optional<std::string>& classHint) {
  std::vector<EndpointConfig> out;
  for (const EndpointConfig& ep : endpoints) {
    if (!classHint || ep.classes.empty() ||
        std::find(ep.classes.begin(), ep.classes.end(), *classHint) != ep.classes.end())
      out.push_back(ep);
  }
  return out;
}

ResultSet mergeResults(const std::vector<ResultSet>& parts) {
  ResultSet out;
  bool haveHead = false;
  for (const ResultSet& p : parts) {
    if (p.vars.empty() && p.rows.empty()) continue;
    if (!haveHead) {
      out.vars = p.vars;
      haveHead = true;
    } else if (p.vars != out.vars) {
      throw ValidationError("cannot merge results with different variables");
    }
    out.rows.insert(out.rows.end(), p.rows.begin(), p.rows.end());
  }
  canonicalize(out);
  return out;
}

FederatedResult fanout(const std::string& queryText, const std::vector<EndpointConfig>& endpoints,
                       const std::optional<std::string>& classHint) {
  validateEndpoints(endpoints);
  std::vector<EndpointConfig> routed = routeEndpoints(endpoints, classHint);
  if (routed.empty()) throw ValidationError("no endpoint serves the requested class");

  std::vector<std::string> expectedVars;
  for (const Variable& v : parseQuery(queryText).select) expectedVars.push_back(v.name);

  auto pending = std::make_shared<Pending>();
  pending->answers.resize(routed.size());
  pending->remaining = routed.size();
  int maxTimeout = 0;
  for (std::size_t i = 0; i < routed.size(); ++i) {
    maxTimeout = std::max(maxTimeout, routed[i].timeoutMs);
    std::thread([pending, i, ep = routed[i], queryText, expectedVars] {
      auto answer = ask(ep, queryText, expectedVars);
      std::lock_guard lock(pending->mu);
      pending->answers[i] = std::move(answer);
      --pending->remaining;
      pending->cv.notify_all();
    }).detach();
  }

  auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(maxTimeout);
  FederatedResult out;
  std::vector<ResultSet> parts;
  {
    std::unique_lock lock(pending->mu);
    pending->cv.wait_until(lock, deadline, [&] { return pending->remaining == 0; });
    for (std::size_t i = 0; i < routed.size(); ++i) {
      EndpointStatus status;
      if (pending->answers[i]) {
        status = pending->answers[i]->first;
        if (status.state == EndpointState::Ok) parts.push_back(pending->answers[i]->second);
      } else {
        status.state = EndpointState::Timeout;
        status.message = "no answer within " + std::to_string(routed[i].timeoutMs) + " ms";
      }
      out.partial = out.partial || status.state != EndpointState::Ok;
      out.perEndpoint[routed[i].name] = std::move(status);
    }
  }
  out.merged = mergeResults(parts);
  if (out.merged.vars.empty()) out.merged.vars = expectedVars;
  return out;
}

}  // namespace yp
