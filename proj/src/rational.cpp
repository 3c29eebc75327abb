#include "fil/rational.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "fil/error.hpp"

namespace fil {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt parse_integer(std::string_view text, std::string_view whole) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (!all_digits(text)) {
    throw Error(ErrorCode::InvalidArgument,
                "not a rational number: '" + std::string(whole) + "'");
  }
  // cpp_int reads a leading zero as an octal prefix.
  const auto first = text.find_first_not_of('0');
  BigInt value{first == std::string_view::npos ? std::string("0") : std::string(text.substr(first))};
  return negative ? BigInt(-value) : value;
}

Rational parse_decimal(std::string_view text) {
  const std::string_view whole = text;
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    BigInt e_value = parse_integer(exp_text, whole);
    if (abs(e_value) > 4000) {
      throw Error(ErrorCode::InvalidArgument,
                  "exponent out of range: '" + std::string(whole) + "'");
    }
    exponent = e_value.convert_to<long>();
    text = text.substr(0, e);
  }
  std::string digits;
  std::size_t fraction_digits = 0;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    if ((!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part)) ||
        (int_part.empty() && frac_part.empty())) {
      throw Error(ErrorCode::InvalidArgument,
                  "not a rational number: '" + std::string(whole) + "'");
    }
    digits = std::string(int_part) + std::string(frac_part);
    fraction_digits = frac_part.size();
  } else {
    if (!all_digits(text)) {
      throw Error(ErrorCode::InvalidArgument,
                  "not a rational number: '" + std::string(whole) + "'");
    }
    digits = std::string(text);
  }
  // cpp_int reads a leading zero as an octal prefix.
  const auto first = digits.find_first_not_of('0');
  digits = first == std::string::npos ? "0" : digits.substr(first);
  BigInt numerator(digits);
  if (negative) numerator = -numerator;
  exponent -= static_cast<long>(fraction_digits);
  BigInt scale = boost::multiprecision::pow(BigInt(10),
                                            static_cast<unsigned>(std::labs(exponent)));
  return exponent >= 0 ? Rational(numerator * scale) : Rational(numerator, scale);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  if (text.empty()) {
    throw Error(ErrorCode::InvalidArgument, "empty rational literal");
  }
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash), text);
    BigInt den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) {
      throw Error(ErrorCode::InvalidArgument,
                  "zero denominator in '" + std::string(text) + "'");
    }
    return Rational(num, den);
  }
  return parse_decimal(text);
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) {
    throw Error(ErrorCode::InvalidArgument, "non-finite value has no rational form");
  }
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  (void)ec;
  return parse_decimal(std::string_view(buf.data(), end - buf.data()));
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string rational_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string rational_string_over(const Rational& r, const BigInt& denominator) {
  const BigInt den = boost::multiprecision::denominator(r);
  if (denominator <= 0 || denominator % den != 0) return rational_string(r);
  const BigInt num = boost::multiprecision::numerator(r) * (denominator / den);
  return num.str() + "/" + denominator.str();
}

std::string decimal17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", x);
  return buf.data();
}

std::string numeric_label(const Rational& r) { return rational_string(r); }

BigInt binomial_coefficient(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (unsigned i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
  }
  return result;
}

BigInt falling_factorial(unsigned n, unsigned k) {
  if (k > n) return 0;
  BigInt result = 1;
  for (unsigned i = 0; i < k; ++i) result *= (n - i);
  return result;
}

}  // namespace fil
