#include "json_util.hpp"

#include "gnnv/errors.hpp"

namespace gnnv {

json parse_json_document(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

std::size_t json_get_count(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw InputError(where + "." + key + ": missing");
  const auto& v = obj[key];
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw InputError(where + "." + key + ": expected a non-negative integer");
  }
  return static_cast<std::size_t>(v.get<long long>());
}

Rational json_rational(const json& value, const std::string& where) {
  if (value.is_number_integer()) {
    return value.is_number_unsigned() ? Rational(BigInt(std::to_string(value.get<unsigned long long>())))
                                      : Rational(BigInt(std::to_string(value.get<long long>())));
  }
  if (value.is_string()) {
    try {
      return parse_rational(value.get<std::string>());
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  if (value.is_number_float()) {
    throw InputError(where + ": non-integer JSON number; write it as a \"p/q\" string to keep it exact");
  }
  throw InputError(where + ": expected an integer or a \"p/q\" string");
}

std::vector<Rational> json_rational_vector(const json& value, const std::string& where) {
  if (!value.is_array()) throw InputError(where + ": expected an array");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(json_rational(value[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::vector<Rational>> json_rational_matrix(const json& value, const std::string& where) {
  if (!value.is_array()) throw InputError(where + ": expected an array of rows");
  std::vector<std::vector<Rational>> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(json_rational_vector(value[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

json rational_to_json(const Rational& q) {
  if (is_integer(q) && fits_int64(q.get_num())) return json(to_int64(q.get_num()));
  return json(to_string(q));
}

json rational_vector_to_json(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& q : v) out.push_back(rational_to_json(q));
  return out;
}

}  // namespace gnnv
