#pragma once

#include <array>
#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "starq/cochain.hpp"
#include "starq/jet.hpp"
#include "starq/rational.hpp"

namespace starq {

/// Name of one contracted index. Each label occurs exactly twice in a term:
/// once as an upper index of a P-factor and once as a derivative index.
using Label = int;

/// ∂_{lower} P^{upper[0] upper[1]}
struct PFactor {
  std::vector<Label> lower;
  std::array<Label, 2> upper{};

  bool operator==(const PFactor&) const = default;
};

/// One scalar operator term in abstract index notation, e.g.
/// ∂_r P^{is} ∂_s P^{jr} ∂_i f ∂_j g. The factor list is one particular
/// arrangement; OPO-ness is a statement about whether a good one exists.
struct AbstractTerm {
  Rational coefficient{1};
  std::vector<PFactor> factors;
  std::vector<std::vector<Label>> args;  ///< derivative labels per argument

  int arity() const { return static_cast<int>(args.size()); }
  std::vector<Label> labels() const;
  Label max_label() const;

  bool operator==(const AbstractTerm&) const = default;
};

using AbstractOperator = std::vector<AbstractTerm>;

/// Position of an index endpoint inside a term.
struct Endpoint {
  enum class Kind { Upper, FactorLower, ArgumentLower };
  Kind kind;
  int owner;     ///< factor or argument number
  int position;  ///< index inside that factor's upper pair / lower list

  bool operator==(const Endpoint&) const = default;
};

struct Contraction {
  Label label;
  Endpoint upper;
  Endpoint lower;
};

/// The perfect matching between upper and lower endpoints. Throws
/// std::invalid_argument if some label is not contracted exactly once.
std::vector<Contraction> wiring(const AbstractTerm& term);
void validate(const AbstractTerm& term);

/// Stores each upper pair in ascending label order, absorbing the sign of the
/// swap into the coefficient.
AbstractTerm with_canonical_signs(AbstractTerm term);

struct OpoResult {
  bool is_opo = false;
  /// Factor order witnessing the property (lexicographically least), empty otherwise.
  std::vector<std::size_t> arrangement;
};

/// True iff some arrangement of the factors has every upper index contracted
/// with a derivative standing strictly to the right of its own factor (on a
/// later factor or on an argument). Arguments always stand rightmost.
OpoResult is_opo(const AbstractTerm& term);

/// Checks one given arrangement.
bool is_opo_arrangement(const AbstractTerm& term, std::span<const std::size_t> order);

/// Sums over all index values in {1,2,3} and substitutes the P-jets.
Cochain concretize(const AbstractTerm& term, PoissonMode mode);
Cochain concretize(const AbstractOperator& op, PoissonMode mode);

/// Hochschild differential at the level of index graphs.
AbstractOperator abstract_delta(const AbstractTerm& term);
/// Gerstenhaber product M∘N by insertion, with labels of N renamed apart.
AbstractOperator abstract_product(const AbstractTerm& m, const AbstractTerm& n);
AbstractOperator abstract_bracket(const AbstractTerm& m, const AbstractTerm& n);

/// Text form: "dP(r;i,s) dP(s;j,r) @1(i) @2(j)" is ∂_rP^{is}∂_sP^{jr}∂_if∂_jg.
/// "P(i,j)" is an undifferentiated factor, "@n(...)" the derivatives on the
/// n-th argument (1-based). A term may start with a rational coefficient, and
/// terms may be joined with + and -. Throws ParseError.
AbstractOperator parse_abstract(std::string_view text);
AbstractTerm parse_abstract_term(std::string_view text);
std::string to_string(const AbstractTerm& term);

/// {f,g} = P^{ij} ∂_i f ∂_j g
AbstractTerm poisson_bracket_term();
/// The three terms of {{f,g},h}.
AbstractOperator jacobi_identity_terms();
/// ∂_kP^{ij}∂_i(P^{kr}∂_rP^{lm} + cycl.)∂_j∂_l f ∂_m g expanded into six terms.
AbstractOperator jacobi_example_terms();
/// ∂_kP^{ij} P^{kr} ∂_i∂_rP^{lm} ∂_j∂_l f ∂_m g, the one ordered term above.
AbstractTerm jacobi_example_opo_term();
/// Concretization of the six-term operator; zero for every Poisson tensor.
Cochain jacobi_example_check(PoissonMode mode);

/// All bilinear index graphs with `factor_count` P-factors in which the two
/// upper indices of every factor land on two different targets. With
/// `opo_only` the targets of factor a are restricted to later factors and the
/// arguments, which yields every OPO graph exactly in one ordered form.
std::vector<AbstractTerm> enumerate_bilinear_graphs(int factor_count, bool opo_only);

struct RandomTermOptions {
  int max_factors = 3;
  int max_arity = 3;
  int max_labels_per_argument = 3;
};

/// A random term that admits an OPO arrangement, returned with its factors
/// shuffled and labels permuted.
AbstractTerm random_opo_term(std::mt19937_64& rng, const RandomTermOptions& options = {});

}  // namespace starq
