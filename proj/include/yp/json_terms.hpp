#pragma once

// JSON encodings of terms and rows shared by the HTTP bodies. Kept out of
// results.hpp so that only translation units producing JSON pull in the
// JSON library.

#include <string>
#include <vector>

#include "json.hpp"
#include "yp/results.hpp"

namespace yp {

nlohmann::ordered_json termToJson(const Term& t);
Term termFromJson(const nlohmann::json& j);
nlohmann::ordered_json rowToJson(const std::vector<std::string>& vars, const Row& row);

}  // namespace yp
