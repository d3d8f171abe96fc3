#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "ra/error.hpp"

namespace ra {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer pow10(unsigned n) {
  Integer r = 1;
  for (unsigned i = 0; i < n; ++i) r *= 10;
  return r;
}

// C(n, k) by the multiplicative formula; each intermediate division is
// exact, so no gcd pass is needed.
inline Integer binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  Integer acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc *= Integer(n - k + i);
    acc /= Integer(i);
  }
  return acc;
}

// Parses "p/q", an optionally signed integer, or a plain decimal with at
// most 30 fractional digits. Every accepted form converts exactly; there is
// no floating-point intermediate.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&](const std::string& why) -> error {
    return error(errc::parse_error,
                 "cannot parse \"" + std::string(text) + "\" as a rational: " + why);
  };

  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw fail("empty string");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
    if (s.empty()) throw fail("sign without digits");
  }

  auto digits_to_int = [&](std::string_view d) -> Integer {
    if (d.empty()) throw fail("missing digits");
    Integer v = 0;
    for (char c : d) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw fail("unexpected character");
      v = v * 10 + (c - '0');
    }
    return v;
  };

  Rational result;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer num = digits_to_int(s.substr(0, slash));
    Integer den = digits_to_int(s.substr(slash + 1));
    if (den == 0) throw fail("zero denominator");
    result = Rational(num, den);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw fail("missing digits");
    if (frac.size() > 30) throw fail("more than 30 fractional digits");
    Integer w = whole.empty() ? Integer(0) : digits_to_int(whole);
    Integer f = frac.empty() ? Integer(0) : digits_to_int(frac);
    Integer scale = pow10(static_cast<unsigned>(frac.size()));
    result = Rational(w * scale + f, scale);
  } else {
    result = Rational(digits_to_int(s));
  }
  if (negative) result = -result;
  return result;
}

// Exact "p/q" form ("p" when the denominator is 1). cpp_rational keeps
// values reduced, so the rendering is canonical.
inline std::string to_fraction_string(const Rational& r) {
  Integer num = boost::multiprecision::numerator(r);
  Integer den = boost::multiprecision::denominator(r);
  std::string out = num.str();
  if (den != 1) {
    out += "/";
    out += den.str();
  }
  return out;
}

// Rounds |r| to `sig` significant decimal digits, returned as a digit string
// plus a decimal exponent: digits "190994" with exponent -11 means
// 1.90994e-11. Pure integer arithmetic.
struct DecimalDigits {
  std::string digits;  // exactly `sig` digits, no sign
  int exponent = 0;    // value = 0.digits * 10^(exponent+1), leading digit nonzero
};

inline DecimalDigits decimal_digits(const Rational& r, int sig) {
  Rational a = r < 0 ? Rational(-r) : r;
  if (a == 0) return {std::string(static_cast<size_t>(sig), '0'), 0};

  Integer num = boost::multiprecision::numerator(a);
  Integer den = boost::multiprecision::denominator(a);

  // exponent e with 10^e <= a < 10^(e+1)
  int e = 0;
  if (num >= den) {
    while (num >= den * 10) {
      den *= 10;
      ++e;
    }
  } else {
    while (num < den) {
      num *= 10;
      --e;
    }
  }
  // now 1 <= num/den < 10; extract sig digits with round-half-up on the tail
  Integer scaled_num = num * pow10(static_cast<unsigned>(sig - 1));
  Integer q = scaled_num / den;
  Integer rem = scaled_num - q * den;
  if (rem * 2 >= den) ++q;
  std::string digits = q.str();
  if (static_cast<int>(digits.size()) > sig) {
    // rounding carried over (9.9999... -> 10.000): drop the extra digit
    digits.pop_back();
    ++e;
  }
  return {digits, e};
}

// Human form with 6 significant digits: positional for moderate magnitudes,
// scientific otherwise. "0" only for exact zero.
inline std::string to_decimal_string(const Rational& r, int sig = 6) {
  if (r == 0) return "0";
  DecimalDigits d = decimal_digits(r, sig);
  std::string sign = r < 0 ? "-" : "";
  int e = d.exponent;
  if (e < -4 || e >= 9) {
    std::string out = sign;
    out += d.digits.substr(0, 1);
    out += ".";
    out += d.digits.substr(1);
    out += "e";
    out += e < 0 ? "-" : "+";
    int mag = e < 0 ? -e : e;
    if (mag < 10) out += "0";
    out += std::to_string(mag);
    return out;
  }
  std::string out = sign;
  if (e < 0) {
    out += "0.";
    for (int i = 0; i < -e - 1; ++i) out += "0";
    out += d.digits;
  } else if (e + 1 >= sig) {
    out += d.digits;
    for (int i = 0; i < e + 1 - sig; ++i) out += "0";
  } else {
    out += d.digits.substr(0, static_cast<size_t>(e + 1));
    out += ".";
    out += d.digits.substr(static_cast<size_t>(e + 1));
  }
  return out;
}

}  // namespace ra
