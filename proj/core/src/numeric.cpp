#include "gnnv/numeric.hpp"

#include <cctype>
#include <limits>

#include "gnnv/errors.hpp"

namespace gnnv {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw InputError("invalid number '" + std::string(whole) + "'");
  }
  BigInt z(std::string(s), 10);
  return negative ? BigInt(-z) : z;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash), text);
    BigInt den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) int_part.remove_prefix(1);
    if ((!int_part.empty() && !all_digits(int_part)) || !all_digits(frac_part)) {
      throw InputError("invalid number '" + std::string(text) + "'");
    }
    BigInt whole = int_part.empty() ? BigInt(0) : BigInt(std::string(int_part), 10);
    BigInt frac(std::string(frac_part), 10);
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac_part.size());
    Rational q(whole * scale + frac, scale);
    q.canonicalize();
    return negative ? Rational(-q) : q;
  }
  return Rational(parse_integer(text, text));
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const BigInt& z) { return z.get_str(); }

bool is_integer(const Rational& q) { return q.get_den() == 1; }

BigInt floor_div(const Rational& q) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

BigInt ceil_div(const Rational& q) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

bool fits_int64(const BigInt& z) {
  return z >= BigInt(std::to_string(std::numeric_limits<std::int64_t>::min())) &&
         z <= BigInt(std::to_string(std::numeric_limits<std::int64_t>::max()));
}

std::int64_t to_int64(const BigInt& z) {
  if (!fits_int64(z)) throw LimitExceeded("integer " + z.get_str() + " does not fit in 64 bits");
  return std::stoll(z.get_str());
}

}  // namespace gnnv
