#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fil/error.hpp"
#include "fil/rational.hpp"

using namespace fil;

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(parse_rational("70/4096"), Rational(35, 2048));
  EXPECT_EQ(parse_rational(" -3 "), Rational(-3));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("-1.5e-3"), Rational(-3, 2000));
  EXPECT_EQ(parse_rational("2E2"), Rational(200));
  EXPECT_EQ(parse_rational(".5"), Rational(1, 2));
  EXPECT_EQ(parse_rational("5."), Rational(5));
}

TEST(Rational, LeadingZerosAreDecimal) {
  EXPECT_EQ(parse_rational("0999999"), Rational(999999));
  EXPECT_EQ(parse_rational("0.999999"), Rational(999999, 1000000));
  EXPECT_EQ(parse_rational("010/08"), Rational(10, 8));
  EXPECT_EQ(parse_rational("1e-05"), Rational(1, 100000));
  EXPECT_EQ(parse_rational("000"), Rational(0));
}

TEST(Rational, RejectsMalformedInput) {
  for (const char* bad : {"", "abc", "1/0", "1/", "/2", ".", "1.2.3", "1e", "0x10", "1e99999"}) {
    EXPECT_THROW(parse_rational(bad), Error) << bad;
  }
}

TEST(Rational, FromDoubleUsesShortestDecimal) {
  EXPECT_EQ(rational_from_double(0.1), Rational(1, 10));
  EXPECT_EQ(rational_from_double(0.001), Rational(1, 1000));
  EXPECT_EQ(rational_from_double(0.999999), Rational(999999, 1000000));
  EXPECT_EQ(rational_from_double(-2.5), Rational(-5, 2));
  EXPECT_EQ(rational_from_double(1e-300), Rational(1) / boost::multiprecision::pow(BigInt(10), 300));
  EXPECT_THROW(rational_from_double(std::numeric_limits<double>::infinity()), Error);
  EXPECT_THROW(rational_from_double(std::nan("")), Error);
}

TEST(Rational, FromDoubleRoundTripsRandomValues) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
  std::uniform_int_distribution<int> exponent(-40, 40);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::ldexp(mantissa(rng), exponent(rng));
    EXPECT_EQ(to_double(rational_from_double(x)), x);
  }
}

TEST(Rational, Rendering) {
  EXPECT_EQ(rational_string(Rational(70, 4096)), "35/2048");
  EXPECT_EQ(rational_string(Rational(4)), "4");
  EXPECT_EQ(rational_string_over(Rational(70, 4096), BigInt(4096)), "70/4096");
  EXPECT_EQ(rational_string_over(Rational(1), BigInt(4096)), "4096/4096");
  EXPECT_EQ(rational_string_over(Rational(0), BigInt(4096)), "0/4096");
  EXPECT_EQ(rational_string_over(Rational(1, 3), BigInt(4096)), "1/3");
  EXPECT_EQ(numeric_label(Rational(-7)), "-7");
  EXPECT_EQ(numeric_label(Rational(3, 2)), "3/2");
  EXPECT_EQ(decimal17(0.05), "0.050000000000000003");
  EXPECT_EQ(decimal17(0.5), "0.5");
}

TEST(Rational, Combinatorics) {
  EXPECT_EQ(binomial_coefficient(52, 5), 2598960);
  EXPECT_EQ(binomial_coefficient(5, 0), 1);
  EXPECT_EQ(binomial_coefficient(3, 5), 0);
  EXPECT_EQ(falling_factorial(8, 3), 336);
  EXPECT_EQ(falling_factorial(4, 0), 1);
  for (unsigned n = 1; n < 30; ++n) {
    for (unsigned k = 1; k < n; ++k) {
      EXPECT_EQ(binomial_coefficient(n, k),
                binomial_coefficient(n - 1, k - 1) + binomial_coefficient(n - 1, k));
    }
  }
}
