#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "starq/cochain.hpp"
#include "starq/jet.hpp"
#include "starq/polynomial.hpp"
#include "starq/star.hpp"

namespace starq {

/// (P^{23}, P^{31}, P^{12})
struct PoissonVector {
  std::array<Polynomial, 3> components;

  /// P^{ij} for 1-based i, j.
  Polynomial entry(int i, int j) const;
};

PoissonVector gradient_vector(const Polynomial& phi);
/// ψ∇φ, or ∇φ when psi is absent.
PoissonVector poisson_vector(const JetContext& context);
/// Parses "a,b,c" into three polynomials. Throws ParseError.
PoissonVector parse_poisson_vector(std::string_view text);

/// P⃗·(∇×P⃗), zero exactly when the bracket satisfies the Jacobi identity.
Polynomial jacobi_residual(const PoissonVector& p);

/// The same residual with P expressed through formal jets, together with all
/// of its derivatives whose jets stay within `max_jet_order` (index 0 is the
/// residual itself).
std::vector<JetPolynomial> jacobi_residual_jets(PoissonMode mode, int max_jet_order);

using ConstantBivector = std::array<std::array<Rational, 3>, 3>;

/// (1/(2^k k!)) P^{i₁j₁}⋯P^{i_kj_k} ∂_{i₁…i_k} ⊗ ∂_{j₁…j_k}.
/// Throws std::invalid_argument unless p is antisymmetric.
ExplicitCochain moyal_level(const ConstantBivector& p, int k);
/// Throws std::invalid_argument for a non-constant Poisson vector.
ExplicitCochain moyal_level(const PoissonVector& p, int k);
/// Levels M_0 … M_order of the Moyal product.
ExplicitStarProduct moyal_star(const PoissonVector& p, int order);

/// Coefficients of ν⁰ … ν^order in f⋆g.
std::vector<Polynomial> star_series(const ExplicitStarProduct& star, const Polynomial& f, const Polynomial& g,
                                    int order);

/// Coefficients of ν⁰ … ν^order in (f⋆g)⋆h − f⋆(g⋆h).
std::vector<Polynomial> associator(const ExplicitStarProduct& star, const Polynomial& f, const Polynomial& g,
                                   const Polynomial& h, int order);

/// Coefficients of ν⁰ … ν^order in f⋆g − g⋆f.
std::vector<Polynomial> commutator_probe(const ExplicitStarProduct& star, const Polynomial& f,
                                         const Polynomial& g, int order = -1);

struct AssociatorWitness {
  Exponents f;
  Exponents g;
  Exponents h;
  int order = 0;  ///< power of ν with the nonzero coefficient
  Polynomial residual;

  std::string describe() const;
};

/// Checks every monomial triple with deg f + deg g + deg h <= max_degree
/// through ν^order and returns the first failing triple in canonical order.
std::optional<AssociatorWitness> find_associator_failure(const ExplicitStarProduct& star, int max_degree,
                                                         int order = -1);

/// Number of triples examined by find_associator_failure.
std::size_t monomial_triple_count(int max_degree);

/// Level k whose parity M_k(g,f) = (−1)^k M_k(f,g) fails, if any.
std::optional<int> parity_failure(const ExplicitStarProduct& star);

struct CheckResult {
  std::string name;
  std::string inputs;    ///< digest of what was checked
  std::string residual;  ///< "0" or a description of the nonzero residual
  bool pass = true;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  std::optional<AssociatorWitness> witness;

  bool pass() const;
};

struct VerifyOptions {
  int degree = 3;   ///< bound on deg f + deg g + deg h
  int order = -1;   ///< highest power of ν; -1 for the order of the star
  std::string digest;
  /// When known, the commutator of coordinates is compared with {x_i, x_j}.
  std::optional<PoissonVector> poisson;
};

/// Associator, parity, and commutator suites.
VerificationReport verify_star(const ExplicitStarProduct& star, const VerifyOptions& options = {});

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace starq
