#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gnnv {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Parses "17", "-3/4" or a finite decimal such as "0.25" into an exact
/// rational. Throws InputError on anything else.
Rational parse_rational(std::string_view text);

/// Integer if the denominator is 1, otherwise "p/q".
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

bool is_integer(const Rational& q);
BigInt floor_div(const Rational& q);
BigInt ceil_div(const Rational& q);

BigInt lcm(const BigInt& a, const BigInt& b);

/// Fits in int64 without loss.
bool fits_int64(const BigInt& z);
std::int64_t to_int64(const BigInt& z);

}  // namespace gnnv
