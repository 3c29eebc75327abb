#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace fil {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses a fraction "p/q" or a finite decimal ("0.25", "-1.5e-3") into an
/// exact rational. Throws Error(InvalidArgument) on malformed input.
Rational parse_rational(std::string_view text);

/// Exact rational equal to the shortest decimal that round-trips `x`, so
/// 0.1 becomes 1/10 rather than the binary expansion of the double.
Rational rational_from_double(double x);

double to_double(const Rational& r);

/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string rational_string(const Rational& r);

/// Renders `r` over `denominator` when it divides evenly ("70/4096"), and
/// falls back to lowest terms otherwise.
std::string rational_string_over(const Rational& r, const BigInt& denominator);

/// %.17g formatting used for every decimal emitted by the engine.
std::string decimal17(double x);

/// Label text for a numeric value: integers print without a fraction,
/// other rationals as "p/q".
std::string numeric_label(const Rational& r);

BigInt binomial_coefficient(unsigned n, unsigned k);
BigInt falling_factorial(unsigned n, unsigned k);

/// A probability with an optional exact value. `value` always holds the
/// double; `exact` is present when the computation stayed in rationals.
struct Prob {
  double value = 0.0;
  std::optional<Rational> exact;

  static Prob from_exact(const Rational& r) { return {to_double(r), r}; }
  static Prob from_double(double v) { return {v, std::nullopt}; }
  bool is_exact() const { return exact.has_value(); }
};

}  // namespace fil
