#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace treeshift {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "p", "p/q", a plain decimal ("0.25", "1e-3") or "sqrt(x)" where x is
/// any of the former. The sqrt form is only accepted by parse_squared_value.
/// Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// Parses a nonnegative value and returns its square exactly. Accepts
/// everything parse_rational does plus "sqrt(x)", which yields x.
Rational parse_squared_value(std::string_view text);

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);

/// Decimal with 17 significant digits.
std::string to_decimal_string(double value);

double to_double(const Rational& value);

/// Exact square root when value is the square of a rational.
std::optional<Rational> exact_sqrt(const Rational& value);

/// Exact power base^exponent for a positive rational exponent p/q, when the
/// q-th roots of numerator and denominator are integers.
std::optional<Rational> exact_pow(const Rational& base, const Rational& exponent);

/// Exact arithmetic on rationals: equality is equality.
struct ExactArithmetic {
  using value_type = Rational;
  static constexpr bool is_exact = true;

  bool equal(const Rational& a, const Rational& b) const { return a == b; }
  bool is_zero(const Rational& a) const { return a == 0; }
  bool less_or_equal(const Rational& a, const Rational& b) const { return a <= b; }
  bool near_miss(const Rational&, const Rational&) const { return false; }
  double to_real(const Rational& a) const { return to_double(a); }
  Rational from_rational(const Rational& a) const { return a; }
  // Binary doubles are dyadic rationals, so this is exact.
  Rational from_real(double x) const { return Rational(x); }
  std::string format(const Rational& a) const { return to_string(a); }
};

/// Floating-point arithmetic with a relative tolerance on squared quantities.
struct FloatArithmetic {
  using value_type = double;
  static constexpr bool is_exact = false;

  double eps = 1e-9;

  bool equal(double a, double b) const {
    return std::abs(a - b) <= eps * std::max({1.0, std::abs(a), std::abs(b)});
  }
  bool is_zero(double a) const { return std::abs(a) <= eps; }
  bool less_or_equal(double a, double b) const { return a <= b || equal(a, b); }
  // Distinct under eps but within ten times eps: a comparison that could
  // flip under modest rounding.
  bool near_miss(double a, double b) const {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    const double gap = std::abs(a - b);
    return gap > eps * scale && gap <= 10.0 * eps * scale;
  }
  double to_real(double a) const { return a; }
  double from_rational(const Rational& a) const { return to_double(a); }
  double from_real(double x) const { return x; }
  std::string format(double a) const { return to_decimal_string(a); }
};

/// A value of T or +infinity.
template <class T>
class Extended {
 public:
  Extended(T value) : value_(std::move(value)) {}  // NOLINT: implicit by intent

  static Extended infinity() { return Extended(); }

  bool is_infinite() const { return !value_.has_value(); }
  bool is_finite() const { return value_.has_value(); }

  const T& value() const {
    if (!value_) throw std::logic_error("Extended::value on infinity");
    return *value_;
  }

  friend bool operator==(const Extended& a, const Extended& b) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
    return *a.value_ == *b.value_;
  }

 private:
  Extended() = default;
  std::optional<T> value_;
};

template <class T>
double to_real(const Extended<T>& x) {
  if (x.is_infinite()) return std::numeric_limits<double>::infinity();
  if constexpr (std::is_same_v<T, Rational>) {
    return to_double(x.value());
  } else {
    return static_cast<double>(x.value());
  }
}

inline std::string format_extended(const Extended<Rational>& x) {
  return x.is_infinite() ? "inf" : to_string(x.value());
}

inline std::string format_extended(const Extended<double>& x) {
  return x.is_infinite() ? "inf" : to_decimal_string(x.value());
}

}  // namespace treeshift
