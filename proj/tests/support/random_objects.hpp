#pragma once

#include <cstdint>
#include <random>

#include "starq/cochain.hpp"
#include "starq/jet.hpp"
#include "starq/polynomial.hpp"
#include "printers.hpp"

namespace starq::testing {

/// STARQ_SEED if set, otherwise a fixed default.
std::uint64_t test_seed();
void set_test_seed(std::uint64_t seed);

MultiIndex random_multi_index(std::mt19937_64& rng, int min_order, int max_order);
Rational random_rational(std::mt19937_64& rng);
Polynomial random_polynomial(std::mt19937_64& rng, int max_degree, int terms = 4);
JetPolynomial random_jet_polynomial(std::mt19937_64& rng, int max_degree, int terms = 3, bool with_psi = true);

/// Random cochain with jet coefficients. Slots may be empty unless
/// `normalized` is set.
Cochain random_cochain(std::mt19937_64& rng, int arity, int max_slot_order, int max_jet_degree, int terms = 4,
                       bool normalized = false);
ExplicitCochain random_explicit_cochain(std::mt19937_64& rng, int arity, int max_slot_order, int max_degree,
                                        int terms = 4, bool normalized = false);

}  // namespace starq::testing
