#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "starq/cochain.hpp"
#include "starq/jet.hpp"
#include "starq/linear_algebra.hpp"
#include "starq/opo.hpp"
#include "starq/polynomial.hpp"

namespace starq {

/// AR_k = A(degree-(1,1,1) part of R_k) together with its value on the
/// coordinate triple (x¹, x², x³).
template <class Coeff>
struct BasicObstructionReport {
  enum class Method {
    Parity,  ///< odd level: R_k(f,g,h) = R_k(h,g,f) was checked, so A kills it
    Direct,  ///< antisymmetrized degree-(1,1,1) part computed term by term
  };

  int level = 0;
  Method method = Method::Direct;
  BasicCochain<Coeff> antisymmetrized{3};
  Coeff coordinate_witness;
  bool is_zero = true;
  /// (2/3)·(M_{k-1}(M_1(f,g),h) + cycl.) restricted to degree (1,1,1), when
  /// the lower levels were supplied.
  std::optional<BasicCochain<Coeff>> shortcut;
  bool shortcut_agrees = true;
};

template <class Coeff>
struct BasicStarProduct {
  PoissonMode mode = PoissonMode::NablaPhi;
  int order = 0;
  std::vector<BasicCochain<Coeff>> levels;  ///< M_0 … M_order
  std::vector<BasicObstructionReport<Coeff>> reports;  ///< one per level 2 … order
  std::string phi_source = "sym";
  std::string psi_source;
};

using ObstructionReport = BasicObstructionReport<JetPolynomial>;
using ExplicitObstructionReport = BasicObstructionReport<Polynomial>;
using StarProduct = BasicStarProduct<JetPolynomial>;
using ExplicitStarProduct = BasicStarProduct<Polynomial>;

/// M_1 = ½ P^{ij} ∂_i ⊗ ∂_j with P expressed through the jets of the mode.
Cochain first_order_cochain(PoissonMode mode);

/// R_k = Σ_{l=1}^{k-1} M_l ∘ M_{k-l} = ½ Σ_{l=1}^{k-1} [M_l, M_{k-l}] from
/// levels[0..k-1]. Returns the zero 3-cochain for k = 1.
template <class Coeff>
BasicCochain<Coeff> assemble_rhs(const std::vector<BasicCochain<Coeff>>& levels, int k);

/// Throws CocycleViolation unless δR = 0.
template <class Coeff>
void check_cocycle(const BasicCochain<Coeff>& rhs, int k);

/// Obstruction of R_k. Odd levels take the parity path when R_k has the
/// reversal symmetry; otherwise the antisymmetrization is computed directly.
/// When `lower` holds M_0 … M_{k-1} and k is even, the reduced cyclic form is
/// computed as well and compared.
template <class Coeff>
BasicObstructionReport<Coeff> obstruction(const BasicCochain<Coeff>& rhs, int k,
                                          const std::vector<BasicCochain<Coeff>>* lower = nullptr,
                                          bool verify_cocycle = true);

/// The reduced cyclic form of AR_k from M_{k-1} and M_1.
template <class Coeff>
BasicCochain<Coeff> obstruction_shortcut(const BasicCochain<Coeff>& previous,
                                         const BasicCochain<Coeff>& first);

/// Every coefficient monomial at level k must contain k φ-jets (and k ψ-jets
/// in the ψ∇φ mode), and slot orders plus jet orders must add up to 3k.
/// Throws GradingViolation naming the first offending term.
void check_grading(const Cochain& c, int k, PoissonMode mode, const std::string& what);

/// Unit-coefficient parity-adapted basis operators at level k whose total
/// derivative multi-index is `total`: ∂_α⊗∂_β + (−1)^k ∂_β⊗∂_α with α+β = total,
/// α ≤ β, both non-empty, and |total| >= 3.
std::vector<SlotTuple> ansatz_slots(const MultiIndex& total, int k);
std::vector<ExplicitCochain> ansatz_operators(const MultiIndex& total, int k);

/// Solves δM = R in the parity-(−1)^k ansatz. The system splits into
/// independent blocks, one per (total derivative index, coefficient
/// monomial); within each block free variables are set to zero. Throws
/// InfeasibleSystem when a block has no solution.
template <class Coeff>
BasicCochain<Coeff> solve_delta(const BasicCochain<Coeff>& rhs, int k);

/// Searches for M_2, M_3 built only from ordered index graphs such that
///   δM_2 = M_1∘M_1,
///   δM_3 = M_1∘M_2 + M_2∘M_1,
///   A((M_3∘M_1 + M_1∘M_3) of degree (1,1,1)) = 0,
/// which is the condition for continuing the recursion to level 4 with the
/// quadratic term M_2∘M_2 (it has no degree-(1,1,1) part). All three
/// equations are linear in the graph coefficients and are solved jointly.
struct OrderedSearchOptions {
  /// 2: first equation only, 3: first two, 4: all three.
  int max_level = 4;
  /// Also run the unrestricted solver to level 3 and report its AR_4.
  bool run_unrestricted = true;
};

template <class Coeff>
struct BasicOrderedSearchReport {
  PoissonMode mode = PoissonMode::PsiNablaPhi;
  int max_level = 4;
  std::vector<std::string> level2_graphs;  ///< index-graph text of every unknown
  std::vector<std::string> level3_graphs;
  std::size_t equations = 0;
  std::size_t rank = 0;

  bool level2_feasible = false;      ///< δM_2 = R_2 alone
  bool cobound_feasible = false;     ///< plus δM_3 = R_3
  bool restricted_feasible = false;  ///< every equation up to max_level

  /// Solution of the deepest solvable stage, free coefficients zero.
  std::vector<Rational> level2_coefficients;
  std::vector<Rational> level3_coefficients;
  std::optional<BasicCochain<Coeff>> m2;
  std::optional<BasicCochain<Coeff>> m3;
  /// Obstruction at level 4 left by (m2, m3); zero when the full system is solvable.
  std::optional<BasicObstructionReport<Coeff>> ar4;

  /// In the ψ∇φ mode the full system is expected to be unsolvable; a
  /// solution is a counterexample to that expectation.
  bool refutes_expectation() const {
    return mode == PoissonMode::PsiNablaPhi && max_level >= 4 && restricted_feasible;
  }

  std::optional<bool> unrestricted_feasible;  ///< solver reaches M_3
  std::optional<bool> unrestricted_ar4_zero;  ///< and its gauge has AR_4 = 0
  double seconds = 0.0;
};

using OrderedSearchReport = BasicOrderedSearchReport<JetPolynomial>;
using ExplicitOrderedSearchReport = BasicOrderedSearchReport<Polynomial>;

/// Symbolic potentials.
OrderedSearchReport ordered_search(PoissonMode mode, const OrderedSearchOptions& options = {});
/// Concrete potentials.
ExplicitOrderedSearchReport ordered_search(PoissonMode mode, const JetContext& context,
                                           const OrderedSearchOptions& options = {});

enum class Gauge {
  Ordered,  ///< levels 2 and 3 from ordered index graphs, higher levels from the block solver
  Block,    ///< every level from the block solver
};

std::string_view to_string(Gauge gauge);
Gauge parse_gauge(std::string_view text);

struct BuildOptions {
  Gauge gauge = Gauge::Ordered;
  /// Bound on the jet orders appearing in M_0 … M_N; 0 selects 2N+1.
  int jet_order = 0;
  bool verify_cocycles = true;
  bool verify_solutions = true;
  /// Stop after the obstruction of level N+1 has been computed as well.
  bool report_next_obstruction = false;
};

/// Outcome of a construction. `star.levels` holds every level that could be
/// built; `obstructed_level` is set when the recursion stopped on AR_k != 0.
template <class Coeff>
struct BasicBuildResult {
  BasicStarProduct<Coeff> star;
  std::optional<int> obstructed_level;
  /// Present for the ordered gauge.
  std::optional<BasicOrderedSearchReport<Coeff>> ordered_search;
};

using BuildResult = BasicBuildResult<JetPolynomial>;
using ExplicitBuildResult = BasicBuildResult<Polynomial>;

/// φ (and ψ) as independent jet variables: the result holds for every potential.
BuildResult build_star_symbolic(PoissonMode mode, int order, const BuildOptions& options = {});

/// Concrete polynomial potentials.
ExplicitBuildResult build_star_explicit(PoissonMode mode, const JetContext& context, int order,
                                        const BuildOptions& options = {});

/// Continues a construction from given lower levels M_0 … M_{m}.
template <class Coeff>
BasicBuildResult<Coeff> extend_star(BasicStarProduct<Coeff> star, int order,
                                    const BuildOptions& options = {});

/// Substitutes potentials into every level and report.
ExplicitStarProduct specialize(const StarProduct& star, const JetContext& context);

/// Largest jet order over all coefficients (0 for constant coefficients).
int max_jet_order(const Cochain& c);

// ---------------------------------------------------------------------------
// OPO audit

enum class LiftStatus {
  Opo,           ///< M_k is a combination of ordered index graphs
  LiftedNotOpo,  ///< expressible through index graphs, but not through ordered ones
  NotLiftable,   ///< not a combination of index graphs at all
  Undetermined,  ///< level too large for the exhaustive graph enumeration
};

std::string_view to_string(LiftStatus status);

struct LevelAudit {
  int level = 0;
  LiftStatus status = LiftStatus::Undetermined;
  std::size_t ordered_graphs = 0;
  std::size_t all_graphs = 0;
  /// Whether δM_k = R_k also has a solution among ordered graphs (a different
  /// gauge than the solver's); unset when not examined.
  std::optional<bool> ordered_representative;
};

struct GraphCochain {
  AbstractTerm graph;
  Cochain cochain;
};

/// Concretized, parity-projected bilinear index graphs with k P-factors that
/// vanish on constants and carry at least three derivatives (k >= 2). Graphs
/// concretizing to zero are dropped.
std::vector<GraphCochain> graph_basis(int k, PoissonMode mode, bool ordered_only);

/// Attempts to lift every level to index graphs. Levels above 3 are
/// reported as undetermined.
std::vector<LevelAudit> opo_audit(const StarProduct& star);

/// Coordinates of a cochain as a sparse vector over (block, slot tuple,
/// coefficient monomial), so that several cochain equations can be stacked
/// into one linear system.
template <class Coeff>
using FlatKey = std::tuple<int, SlotTuple, typename Coeff::key_type>;

template <class Coeff>
void flatten_into(std::map<FlatKey<Coeff>, Rational>& out, const BasicCochain<Coeff>& c, int block,
                  const Rational& scale = Rational(1)) {
  for (const auto& [slots, coefficient] : c.terms()) {
    for (const auto& [key, value] : coefficient.terms()) {
      out[FlatKey<Coeff>{block, slots, key}] += scale * value;
    }
  }
}

template <class Coeff>
SparseVector<FlatKey<Coeff>> flatten(const BasicCochain<Coeff>& c, int block = 0) {
  std::map<FlatKey<Coeff>, Rational> m;
  flatten_into(m, c, block);
  return to_sparse(m);
}

}  // namespace starq
