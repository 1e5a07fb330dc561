#pragma once

// Internal helpers shared by the JSON readers. Not installed.

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>
#include "gnnv/numeric.hpp"

namespace gnnv {

using json = nlohmann::json;

json parse_json_document(std::string_view text);

std::size_t json_get_count(const json& obj, const char* key, const std::string& where);

/// Integer JSON numbers or strings accepted by parse_rational.
Rational json_rational(const json& value, const std::string& where);
std::vector<Rational> json_rational_vector(const json& value, const std::string& where);
std::vector<std::vector<Rational>> json_rational_matrix(const json& value, const std::string& where);

json rational_to_json(const Rational& q);
json rational_vector_to_json(const std::vector<Rational>& v);

}  // namespace gnnv
