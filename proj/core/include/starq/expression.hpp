#pragma once

#include <string_view>

#include "starq/polynomial.hpp"

namespace starq {

/// Parses a polynomial in x1, x2, x3 with integer or rational coefficients.
/// Supports + - * ^ (non-negative integer exponents), parentheses, and
/// division by a nonzero constant, e.g. "1/2*(x1^2+x2^2+x3^2)".
/// Throws ParseError on malformed input or division by a non-constant.
Polynomial parse_polynomial(std::string_view text);

}  // namespace starq
