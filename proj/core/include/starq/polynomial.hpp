#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "starq/multi_index.hpp"
#include "starq/sparse_polynomial.hpp"

namespace starq {

/// Exponent vector of an explicit monomial x1^a x2^b x3^c.
struct Exponents {
  std::array<std::uint16_t, 3> e{};

  int degree() const { return e[0] + e[1] + e[2]; }
  Exponents operator*(const Exponents& o) const {
    return {{static_cast<std::uint16_t>(e[0] + o.e[0]), static_cast<std::uint16_t>(e[1] + o.e[1]),
             static_cast<std::uint16_t>(e[2] + o.e[2])}};
  }
  auto operator<=>(const Exponents&) const = default;
};

/// Explicit polynomial in the coordinates x1, x2, x3.
using Polynomial = SparsePolynomial<Exponents>;

Polynomial coordinate(int index);
Polynomial monomial_x(int a, int b, int c, const Rational& coefficient = Rational(1));

Polynomial derivative(const Polynomial& p, int axis);
Polynomial derivative(const Polynomial& p, const MultiIndex& index);
Polynomial power(const Polynomial& p, int exponent);
int degree(const Polynomial& p);
Rational evaluate(const Polynomial& p, std::span<const Rational, 3> point);

/// Human-readable form, e.g. "x1*x2 - 1/2*x3^2"; "0" for the zero polynomial.
std::string to_string(const Polynomial& p);

/// All monomials of total degree <= max_degree, in graded order.
std::vector<Exponents> monomials_up_to(int max_degree);

}  // namespace starq
