#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "starq/multi_index.hpp"
#include "starq/polynomial.hpp"
#include "starq/sparse_polynomial.hpp"

namespace starq {

enum class Potential : std::uint8_t { Phi = 0, Psi = 1 };

/// How the Poisson tensor is expressed through the potentials:
/// P^{ij} = ε^{ijk} ∂_kφ, or P^{ij} = ε^{ijk} ψ ∂_kφ.
enum class PoissonMode { NablaPhi, PsiNablaPhi };

std::string_view to_string(PoissonMode mode);
PoissonMode parse_mode(std::string_view text);

/// Formal partial derivative ∂_I φ or ∂_I ψ. φ-jets always carry |I| >= 1;
/// ψ-jets may be undifferentiated.
class JetVariable {
 public:
  static JetVariable phi(const MultiIndex& index);
  static JetVariable psi(const MultiIndex& index);

  Potential potential() const { return potential_; }
  const MultiIndex& index() const { return index_; }
  JetVariable differentiated(int axis) const;

  /// "phi_112", "psi_".
  std::string name() const;
  static JetVariable parse(std::string_view name);

  bool operator==(const JetVariable&) const = default;
  /// Potential tag, then differential order, then lexicographic index.
  std::strong_ordering operator<=>(const JetVariable& other) const;

 private:
  JetVariable(Potential p, MultiIndex index) : potential_(p), index_(index) {}
  Potential potential_ = Potential::Phi;
  MultiIndex index_;
};

/// Commutative product of jet variables, kept sorted.
class JetMonomial {
 public:
  JetMonomial() = default;
  explicit JetMonomial(std::vector<JetVariable> factors);

  const std::vector<JetVariable>& factors() const { return factors_; }
  JetMonomial operator*(const JetMonomial& other) const;

  int count(Potential p) const;
  /// Σ |I| over all factors.
  int index_weight() const;
  int max_order() const;

  bool operator==(const JetMonomial&) const = default;
  auto operator<=>(const JetMonomial&) const = default;

 private:
  std::vector<JetVariable> factors_;
};

/// Exact polynomial in φ- and ψ-jets.
using JetPolynomial = SparsePolynomial<JetMonomial>;

JetPolynomial jet(const JetVariable& v, const Rational& coefficient = Rational(1));

/// One monomial as written, before canonical ordering.
struct RawJetTerm {
  Rational coefficient;
  std::vector<JetVariable> factors;
};

/// Sorts factors, merges equal monomials and drops zeros. Idempotent.
JetPolynomial canonicalize(const std::vector<RawJetTerm>& raw);

/// Total derivative D_axis, acting on jets by φ_I -> φ_{I+axis}.
JetPolynomial derivative(const JetPolynomial& p, int axis);
JetPolynomial derivative(const JetPolynomial& p, const MultiIndex& index);

/// ∂_I P^{ij}: a derivative of one Poisson-tensor component.
struct PJet {
  int upper_first;
  int upper_second;
  MultiIndex lower;
};

/// A formal polynomial in P-jet symbols.
struct PJetTerm {
  Rational coefficient;
  std::vector<PJet> factors;
};

/// Levi-Civita symbol ε^{ijk} with 1-based indices.
int levi_civita(int i, int j, int k);

/// Replaces ∂_I P^{ij} by ε^{ijk} ∂_I ∂_k φ (or ∂_I(ψ ∂_k φ) in PsiNablaPhi mode).
/// Throws std::out_of_range for upper indices outside {1,2,3}.
JetPolynomial substitute_P(const PJet& symbol, PoissonMode mode);
JetPolynomial substitute_P(const std::vector<PJetTerm>& expr, PoissonMode mode);

/// Concrete potentials used to ground jet polynomials.
struct JetContext {
  Polynomial phi;
  std::optional<Polynomial> psi;
};

/// Replaces every jet by the corresponding derivative of phi / psi.
/// Throws std::invalid_argument if a ψ-jet occurs and psi is absent.
Polynomial eval_jets(const JetPolynomial& p, const JetContext& context);

std::string to_string(const JetPolynomial& p);

}  // namespace starq
