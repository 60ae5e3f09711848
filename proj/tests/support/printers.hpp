#pragma once

#include <ostream>

#include "starq/cochain.hpp"
#include "starq/jet.hpp"
#include "starq/polynomial.hpp"

// Readable gtest failure output, found by argument-dependent lookup.
namespace starq {

template <class Key>
void PrintTo(const SparsePolynomial<Key>& p, std::ostream* os) {
  *os << to_string(p);
}

template <class Coeff>
void PrintTo(const BasicCochain<Coeff>& c, std::ostream* os) {
  *os << "cochain(arity " << c.arity() << ") {";
  for (const auto& [slots, coefficient] : c.terms()) {
    *os << " [";
    for (std::size_t i = 0; i < slots.size(); ++i) *os << (i ? "," : "") << slots[i].digits();
    *os << "]: " << to_string(coefficient) << ";";
  }
  *os << " }";
}

}  // namespace starq
