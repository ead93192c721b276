#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "yp/results.hpp"

namespace yp {

struct EndpointConfig {
  std::string name;
  // Full URL of a /sparql endpoint, e.g. http://127.0.0.1:8081/sparql
  std::string url;
  int timeoutMs = 2000;
  // Business types served; empty means every type.
  std::vector<std::string> classes;

  friend bool operator==(const EndpointConfig&, const EndpointConfig&) = default;
};

// Checks names unique, timeouts positive and URLs of the form
// http://host[:port][/path]. Throws ValidationError.
void validateEndpoints(const std::vector<EndpointConfig>& endpoints);

enum class EndpointState { Ok, Timeout, HttpError, ParseError, Unreachable };

std::string_view endpointStateName(EndpointState s);

struct EndpointStatus {
  EndpointState state = EndpointState::Ok;
  std::size_t rows = 0;
  int httpStatus = 0;
  std::string message;
};

struct FederatedResult {
  ResultSet merged;
  std::map<std::string, EndpointStatus> perEndpoint;
  bool partial = false;
};

// Endpoints serving classHint plus those without a class filter; all of
// them when there is no hint.
std::vector<EndpointConfig> routeEndpoints(const std::vector<EndpointConfig>& endpoints,
                                           const std::optional<std::string>& classHint);

// Union of the inputs, deduplicated and sorted. An input with no vars and no
// rows is the identity. Throws ValidationError when heads differ.
ResultSet mergeResults(const std::vector<ResultSet>& parts);

// Sends the query to every routed endpoint at once and merges the answers.
// Returns once all endpoints answered or the largest timeout elapsed; late
// endpoints are reported as timeouts. Throws ValidationError when routing
// leaves no endpoint and ParseError when the query itself does not parse.
FederatedResult fanout(const std::string& queryText, const std::vector<EndpointConfig>& endpoints,
                       const std::optional<std::string>& classHint = std::nullopt);

}  // namespace yp
