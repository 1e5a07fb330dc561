#include <gtest/gtest.h>

#include "gnnv/errors.hpp"
#include "gnnv/numeric.hpp"

using namespace gnnv;

TEST(Numeric, ParseRational) {
  EXPECT_EQ(parse_rational("17"), Rational(17));
  EXPECT_EQ(parse_rational("-3/4"), Rational(-3, 4));
  EXPECT_EQ(parse_rational("6/8"), Rational(3, 4));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("-1.5"), Rational(-3, 2));
  EXPECT_EQ(parse_rational("123456789012345678901234567890"),
            Rational(BigInt("123456789012345678901234567890")));
}

TEST(Numeric, ParseRejectsGarbage) {
  for (const char* s : {"", "abc", "1/0", "1e5", "0.1.2", "--1", "1/", "/2", "nan"}) {
    EXPECT_THROW(parse_rational(s), InputError) << s;
  }
}

TEST(Numeric, ToString) {
  EXPECT_EQ(to_string(parse_rational("4/2")), "2");
  EXPECT_EQ(to_string(Rational(-1, 3)), "-1/3");
  EXPECT_EQ(to_string(BigInt(-42)), "-42");
}

TEST(Numeric, FloorCeil) {
  EXPECT_EQ(floor_div(Rational(7, 2)), 3);
  EXPECT_EQ(ceil_div(Rational(7, 2)), 4);
  EXPECT_EQ(floor_div(Rational(-7, 2)), -4);
  EXPECT_EQ(ceil_div(Rational(-7, 2)), -3);
  EXPECT_EQ(floor_div(Rational(5)), 5);
  EXPECT_EQ(ceil_div(Rational(-5)), -5);
  EXPECT_TRUE(is_integer(parse_rational("6/3")));
  EXPECT_FALSE(is_integer(Rational(1, 2)));
}

TEST(Numeric, LcmAndInt64) {
  EXPECT_EQ(lcm(BigInt(4), BigInt(6)), 12);
  EXPECT_EQ(lcm(BigInt(0), BigInt(6)), 0);
  EXPECT_TRUE(fits_int64(BigInt("9223372036854775807")));
  EXPECT_FALSE(fits_int64(BigInt("9223372036854775808")));
  EXPECT_TRUE(fits_int64(BigInt("-9223372036854775808")));
  EXPECT_EQ(to_int64(BigInt(-12)), -12);
  EXPECT_THROW(to_int64(BigInt("99999999999999999999")), LimitExceeded);
}
