#include "treeshift/numeric.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <limits>

namespace treeshift {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(),
                                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

[[noreturn]] void malformed(std::string_view text) {
  throw std::invalid_argument("malformed number '" + std::string(text) + "'");
}

// cpp_int reads a leading 0 as an octal prefix.
BigInt decimal_int(std::string_view digits) {
  const auto first = digits.find_first_not_of('0');
  return first == std::string_view::npos ? BigInt(0) : BigInt(std::string(digits.substr(first)));
}

BigInt pow10(long exponent) {
  BigInt result = 1;
  for (long i = 0; i < exponent; ++i) result *= 10;
  return result;
}

// Decimal literal "[-+]digits[.digits][e[-+]digits]" converted exactly.
Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    s = s.substr(0, e);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6) malformed(text);
    exponent = std::stol(std::string(exp_part));
    if (exp_negative) exponent = -exponent;
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part))) {
      malformed(text);
    }
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(s)) malformed(text);
    digits = std::string(s);
  }
  Rational value{decimal_int(digits)};
  if (exponent >= 0) {
    value *= Rational(pow10(exponent));
  } else {
    value /= Rational(pow10(-exponent));
  }
  return negative ? Rational(-value) : value;
}

// Largest r with r^k <= n, for n >= 0.
BigInt integer_root(const BigInt& n, unsigned k) {
  if (n < 2) return n;
  BigInt lo = 0;
  BigInt hi = 1;
  while (boost::multiprecision::pow(hi, k) <= n) hi *= 2;
  while (hi - lo > 1) {
    BigInt mid = (lo + hi) / 2;
    if (boost::multiprecision::pow(mid, k) <= n) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

std::optional<BigInt> exact_integer_root(const BigInt& n, unsigned k) {
  BigInt r = integer_root(n, k);
  if (boost::multiprecision::pow(r, k) == n) return r;
  return std::nullopt;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) malformed(text);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = trim(s.substr(0, slash));
    std::string_view den = trim(s.substr(slash + 1));
    bool negative = false;
    if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
      negative = num.front() == '-';
      num.remove_prefix(1);
    }
    if (!all_digits(num) || !all_digits(den)) malformed(text);
    BigInt d = decimal_int(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational value(decimal_int(num), d);
    return negative ? Rational(-value) : value;
  }
  return parse_decimal(s);
}

Rational parse_squared_value(std::string_view text) {
  std::string_view s = trim(text);
  if (s.starts_with("sqrt(") && s.ends_with(")")) {
    Rational inner = parse_rational(s.substr(5, s.size() - 6));
    if (inner < 0) throw std::invalid_argument("negative value under sqrt in '" + std::string(text) + "'");
    return inner;
  }
  Rational value = parse_rational(s);
  if (value < 0) throw std::invalid_argument("negative value '" + std::string(text) + "'");
  return value * value;
}

std::string to_string(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string to_decimal_string(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

std::optional<Rational> exact_sqrt(const Rational& value) {
  return exact_pow(value, Rational(1, 2));
}

std::optional<Rational> exact_pow(const Rational& base, const Rational& exponent) {
  if (exponent <= 0) throw std::domain_error("exact_pow requires a positive exponent");
  if (base < 0) return std::nullopt;
  const BigInt p = boost::multiprecision::numerator(exponent);
  const BigInt q = boost::multiprecision::denominator(exponent);
  if (p > 4096 || q > 4096) return std::nullopt;
  const auto pu = p.convert_to<unsigned>();
  const auto qu = q.convert_to<unsigned>();
  auto num_root = exact_integer_root(boost::multiprecision::numerator(base), qu);
  auto den_root = exact_integer_root(boost::multiprecision::denominator(base), qu);
  if (!num_root || !den_root) return std::nullopt;
  return Rational(boost::multiprecision::pow(*num_root, pu), boost::multiprecision::pow(*den_root, pu));
}

}  // namespace treeshift
