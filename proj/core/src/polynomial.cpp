#include "starq/polynomial.hpp"

#include <stdexcept>

namespace starq {

Polynomial coordinate(int index) {
  if (index < 1 || index > kDimension) throw std::out_of_range("coordinate index outside {1,2,3}");
  Exponents e;
  e.e[index - 1] = 1;
  return Polynomial::monomial(e);
}

Polynomial monomial_x(int a, int b, int c, const Rational& coefficient) {
  return Polynomial::monomial(
      Exponents{{static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b), static_cast<std::uint16_t>(c)}},
      coefficient);
}

Polynomial derivative(const Polynomial& p, int axis) {
  if (axis < 1 || axis > kDimension) throw std::out_of_range("derivative axis outside {1,2,3}");
  Polynomial out;
  for (const auto& [key, value] : p.terms()) {
    const int power = key.e[axis - 1];
    if (power == 0) continue;
    Exponents lowered = key;
    --lowered.e[axis - 1];
    out.add_term(lowered, value * power);
  }
  return out;
}

Polynomial derivative(const Polynomial& p, const MultiIndex& index) {
  Polynomial out = p;
  for (int axis = 1; axis <= kDimension; ++axis) {
    for (int n = 0; n < index.count(axis) && !out.is_zero(); ++n) out = derivative(out, axis);
  }
  return out;
}

Polynomial power(const Polynomial& p, int exponent) {
  if (exponent < 0) throw std::invalid_argument("negative exponent");
  Polynomial out = Polynomial::constant(1);
  for (int i = 0; i < exponent; ++i) out = out * p;
  return out;
}

int degree(const Polynomial& p) {
  int d = -1;
  for (const auto& [key, value] : p.terms()) d = std::max(d, key.degree());
  return d;
}

Rational evaluate(const Polynomial& p, std::span<const Rational, 3> point) {
  Rational total = 0;
  for (const auto& [key, value] : p.terms()) {
    Rational term = value;
    for (int axis = 0; axis < kDimension; ++axis) {
      for (int n = 0; n < key.e[axis]; ++n) term *= point[axis];
    }
    total += term;
  }
  return total;
}

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  // Highest degree first reads more naturally.
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [key, value] = *it;
    Rational magnitude = abs(value);
    if (first) {
      if (value < 0) out += "-";
    } else {
      out += value < 0 ? " - " : " + ";
    }
    first = false;
    std::string factors;
    for (int axis = 0; axis < kDimension; ++axis) {
      if (key.e[axis] == 0) continue;
      if (!factors.empty()) factors += "*";
      factors += "x" + std::to_string(axis + 1);
      if (key.e[axis] > 1) factors += "^" + std::to_string(key.e[axis]);
    }
    if (factors.empty()) {
      out += magnitude.get_str();
    } else if (magnitude == 1) {
      out += factors;
    } else {
      out += magnitude.get_str() + "*" + factors;
    }
  }
  return out;
}

std::vector<Exponents> monomials_up_to(int max_degree) {
  std::vector<Exponents> out;
  for (int d = 0; d <= max_degree; ++d) {
    for (int a = d; a >= 0; --a) {
      for (int b = d - a; b >= 0; --b) {
        const int c = d - a - b;
        out.push_back(Exponents{{static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b),
                                 static_cast<std::uint16_t>(c)}});
      }
    }
  }
  return out;
}

}  // namespace starq
