#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace starq {

/// Exact rational, always in lowest terms with a positive denominator.
using Rational = mpq_class;

/// "num/den", the denominator is always written (e.g. "3/1").
std::string to_string(const Rational& q);

/// Accepts "n", "-n" and "n/d". Throws ParseError on anything else or d == 0.
Rational parse_rational(std::string_view text);

inline Rational sign_power(int exponent) {
  return (exponent % 2 == 0) ? Rational(1) : Rational(-1);
}

}  // namespace starq
