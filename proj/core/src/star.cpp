#include "starq/star.hpp"

#include <algorithm>
#include <sstream>
#include <type_traits>

#include "starq/error.hpp"
#include "starq/opo.hpp"
#include "starq/parallel.hpp"

namespace starq {

Cochain first_order_cochain(PoissonMode mode) {
  Cochain m(2);
  const Rational half(1, 2);
  for (int i = 1; i <= kDimension; ++i) {
    for (int j = 1; j <= kDimension; ++j) {
      if (i == j) continue;
      m.add_term({MultiIndex::axis(i), MultiIndex::axis(j)}, substitute_P(PJet{i, j, {}}, mode) * half);
    }
  }
  return m;
}

template <class Coeff>
BasicCochain<Coeff> assemble_rhs(const std::vector<BasicCochain<Coeff>>& levels, int k) {
  if (k < 1) throw std::invalid_argument("levels start at 1");
  if (static_cast<int>(levels.size()) < k) {
    throw std::invalid_argument("R_" + std::to_string(k) + " needs the levels M_1 … M_" + std::to_string(k - 1));
  }
  BasicCochain<Coeff> r(3);
  for (int l = 1; l < k; ++l) r += gerstenhaber_product(levels[l], levels[k - l]);
  return r;
}

template <class Coeff>
void check_cocycle(const BasicCochain<Coeff>& rhs, int k) {
  const auto d = hochschild_delta(rhs);
  if (!d.is_zero()) {
    throw CocycleViolation("δR_" + std::to_string(k) + " has " + std::to_string(d.size()) +
                           " nonzero terms; the lower levels are inconsistent");
  }
}

namespace {

/// R(f,g,h) ↦ R(h,g,f)
template <class Coeff>
BasicCochain<Coeff> outer_reversal(const BasicCochain<Coeff>& c) {
  BasicCochain<Coeff> out(3);
  for (const auto& [slots, coefficient] : c.terms()) out.add_term({slots[2], slots[1], slots[0]}, coefficient);
  return out;
}

/// T(f,g,h) + T(g,h,f) + T(h,f,g)
template <class Coeff>
BasicCochain<Coeff> cyclic_sum(const BasicCochain<Coeff>& t) {
  BasicCochain<Coeff> out(3);
  for (const auto& [s, coefficient] : t.terms()) {
    out.add_term(s, coefficient);
    out.add_term({s[2], s[0], s[1]}, coefficient);
    out.add_term({s[1], s[2], s[0]}, coefficient);
  }
  return out;
}

const DegreeProfile kOneDifferential{1, 1, 1};

}  // namespace

template <class Coeff>
BasicCochain<Coeff> obstruction_shortcut(const BasicCochain<Coeff>& previous, const BasicCochain<Coeff>& first) {
  const auto inserted = degree_part(insertion(previous, first, 0), kOneDifferential);
  return cyclic_sum(inserted) * Rational(2, 3);
}

template <class Coeff>
BasicObstructionReport<Coeff> obstruction(const BasicCochain<Coeff>& rhs, int k,
                                          const std::vector<BasicCochain<Coeff>>* lower, bool verify_cocycle) {
  if (rhs.arity() != 3) throw std::invalid_argument("obstruction expects an arity-3 cochain");
  if (verify_cocycle) check_cocycle(rhs, k);
  BasicObstructionReport<Coeff> report;
  report.level = k;
  if (k % 2 == 1 && outer_reversal(rhs) == rhs) {
    report.method = BasicObstructionReport<Coeff>::Method::Parity;
    return report;
  }
  report.method = BasicObstructionReport<Coeff>::Method::Direct;
  report.antisymmetrized = antisymmetrize(degree_part(rhs, kOneDifferential));
  report.coordinate_witness = coordinate_witness(report.antisymmetrized);
  report.is_zero = report.antisymmetrized.is_zero();
  if (lower && k % 2 == 0 && k >= 2 && static_cast<int>(lower->size()) >= k) {
    report.shortcut = obstruction_shortcut((*lower)[k - 1], (*lower)[1]);
    report.shortcut_agrees = *report.shortcut == report.antisymmetrized;
  }
  return report;
}

void check_grading(const Cochain& c, int k, PoissonMode mode, const std::string& what) {
  const int psi_expected = mode == PoissonMode::PsiNablaPhi ? k : 0;
  for (const auto& [slots, coefficient] : c.terms()) {
    for (const auto& [monomial, value] : coefficient.terms()) {
      const int phi = monomial.count(Potential::Phi);
      const int psi = monomial.count(Potential::Psi);
      const int weight = total_order(slots) + monomial.index_weight();
      if (phi != k || psi != psi_expected || weight != 3 * k) {
        std::ostringstream msg;
        msg << what << ": term " << to_string(JetPolynomial::monomial(monomial, value)) << " on slots (";
        for (std::size_t i = 0; i < slots.size(); ++i) msg << (i ? "," : "") << slots[i].digits();
        msg << ") has " << phi << " phi-jets, " << psi << " psi-jets and derivative weight " << weight
            << "; level " << k << " requires " << k << ", " << psi_expected << " and " << 3 * k;
        throw GradingViolation(msg.str());
      }
    }
  }
}

std::vector<SlotTuple> ansatz_slots(const MultiIndex& total, int k) {
  std::vector<SlotTuple> out;
  if (total.order() < 3) return out;
  for (int a = 0; a <= total.count(1); ++a) {
    for (int b = 0; b <= total.count(2); ++b) {
      for (int c = 0; c <= total.count(3); ++c) {
        const MultiIndex alpha = MultiIndex::from_counts(a, b, c);
        const MultiIndex beta = total - alpha;
        if (alpha.empty() || beta.empty() || beta < alpha) continue;
        if (alpha == beta && k % 2 == 1) continue;
        out.push_back({alpha, beta});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ExplicitCochain> ansatz_operators(const MultiIndex& total, int k) {
  std::vector<ExplicitCochain> out;
  for (const auto& s : ansatz_slots(total, k)) {
    ExplicitCochain b(2);
    b.add_term(s, Polynomial::constant(1));
    if (s[0] != s[1]) b.add_term({s[1], s[0]}, Polynomial::constant(sign_power(k)));
    out.push_back(std::move(b));
  }
  return out;
}

namespace {

struct BlockSystem {
  std::vector<SlotTuple> columns;
  SparseEchelon<SlotTuple> echelon;
};

BlockSystem block_system(const MultiIndex& total, int k) {
  BlockSystem system;
  system.columns = ansatz_slots(total, k);
  for (const auto& s : system.columns) {
    std::map<SlotTuple, Rational> image;
    for (const auto& [t, v] : delta_of_slots(s)) image[t] += v;
    if (s[0] != s[1]) {
      const Rational sign = sign_power(k);
      for (const auto& [t, v] : delta_of_slots({s[1], s[0]})) image[t] += sign * v;
    }
    system.echelon.add_column(to_sparse(image));
  }
  return system;
}

}  // namespace

template <class Coeff>
BasicCochain<Coeff> solve_delta(const BasicCochain<Coeff>& rhs, int k) {
  using Key = typename Coeff::key_type;
  if (rhs.arity() != 3) throw std::invalid_argument("solve_delta expects an arity-3 right-hand side");
  if (k < 2) throw std::invalid_argument("solve_delta starts at level 2");

  std::map<std::pair<MultiIndex, Key>, std::map<SlotTuple, Rational>> blocks;
  for (const auto& [slots, coefficient] : rhs.terms()) {
    const MultiIndex total = total_index(slots);
    for (const auto& [key, value] : coefficient.terms()) blocks[{total, key}][slots] += value;
  }

  std::vector<MultiIndex> totals;
  for (const auto& [block, target] : blocks) {
    if (totals.empty() || totals.back() != block.first) totals.push_back(block.first);
  }
  std::vector<BlockSystem> systems(totals.size());
  parallel_for(totals.size(), [&](std::size_t i) { systems[i] = block_system(totals[i], k); });

  std::vector<std::pair<const std::pair<MultiIndex, Key>*, const std::map<SlotTuple, Rational>*>> tasks;
  tasks.reserve(blocks.size());
  for (const auto& [block, target] : blocks) tasks.emplace_back(&block, &target);
  std::vector<std::size_t> system_of(tasks.size());
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    system_of[t] = static_cast<std::size_t>(
        std::lower_bound(totals.begin(), totals.end(), tasks[t].first->first) - totals.begin());
  }
  std::vector<std::optional<SparseVector<std::size_t>>> solutions(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t t) {
    solutions[t] = systems[system_of[t]].echelon.solve(to_sparse(*tasks[t].second));
  });

  BasicCochain<Coeff> m(2);
  const Rational sign = sign_power(k);
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto& [total, key] = *tasks[t].first;
    if (!solutions[t]) {
      throw InfeasibleSystem("δM_" + std::to_string(k) + " = R_" + std::to_string(k) +
                             " has no solution in the block with total derivative index " + total.digits() +
                             " (" + std::to_string(tasks[t].second->size()) + " target terms)");
    }
    const auto& columns = systems[system_of[t]].columns;
    for (const auto& [column, value] : *solutions[t]) {
      const SlotTuple& s = columns[column];
      m.add_term(s, Coeff::monomial(key, value));
      if (s[0] != s[1]) m.add_term({s[1], s[0]}, Coeff::monomial(key, sign * value));
    }
  }
  return m;
}

int max_jet_order(const Cochain& c) {
  int m = 0;
  for (const auto& [slots, coefficient] : c.terms()) {
    for (const auto& [monomial, value] : coefficient.terms()) m = std::max(m, monomial.max_order());
  }
  return m;
}

namespace {

void check_jet_bound(const Cochain& m, int k, int bound) {
  const int reached = max_jet_order(m);
  if (reached > bound) {
    throw GradingViolation("M_" + std::to_string(k) + " contains jets of order " + std::to_string(reached) +
                           ", above the truncation J = " + std::to_string(bound));
  }
}

}  // namespace

template <class Coeff>
BasicBuildResult<Coeff> extend_star(BasicStarProduct<Coeff> star, int order, const BuildOptions& options) {
  constexpr bool symbolic = std::is_same_v<Coeff, JetPolynomial>;
  if (order < 1) throw std::invalid_argument("order must be >= 1");
  if (star.levels.size() < 2) throw std::invalid_argument("a star product needs at least M_0 and M_1");
  const int jet_bound = options.jet_order > 0 ? options.jet_order : 2 * order + 1;

  BasicBuildResult<Coeff> result;
  const int last = options.report_next_obstruction ? order + 1 : order;
  for (int k = static_cast<int>(star.levels.size()); k <= last; ++k) {
    const auto rhs = assemble_rhs(star.levels, k);
    if constexpr (symbolic) check_grading(rhs, k, star.mode, "R_" + std::to_string(k));
    auto report = obstruction(rhs, k, &star.levels, options.verify_cocycles);
    const bool blocked = !report.is_zero;
    star.reports.push_back(std::move(report));
    if (blocked) {
      result.obstructed_level = k;
      break;
    }
    if (k > order) break;

    auto m = solve_delta(rhs, k);
    if (options.verify_solutions && !(hochschild_delta(m) == rhs)) {
      throw InfeasibleSystem("δM_" + std::to_string(k) + " differs from R_" + std::to_string(k));
    }
    if constexpr (symbolic) {
      check_grading(m, k, star.mode, "M_" + std::to_string(k));
      check_jet_bound(m, k, jet_bound);
    }
    star.levels.push_back(std::move(m));
  }
  star.order = static_cast<int>(star.levels.size()) - 1;
  result.star = std::move(star);
  return result;
}

std::string_view to_string(Gauge gauge) { return gauge == Gauge::Ordered ? "ordered" : "block"; }

Gauge parse_gauge(std::string_view text) {
  if (text == "ordered") return Gauge::Ordered;
  if (text == "block") return Gauge::Block;
  throw ParseError("unknown gauge '" + std::string(text) + "' (expected ordered or block)");
}

namespace {

/// Recomputes the obstruction report of an existing level and checks δM_k = R_k.
template <class Coeff>
BasicObstructionReport<Coeff> existing_level_report(const BasicStarProduct<Coeff>& star, int k, int order,
                                                    const BuildOptions& options) {
  const auto rhs = assemble_rhs(star.levels, k);
  if constexpr (std::is_same_v<Coeff, JetPolynomial>) {
    check_grading(rhs, k, star.mode, "R_" + std::to_string(k));
    check_grading(star.levels[k], k, star.mode, "M_" + std::to_string(k));
    check_jet_bound(star.levels[k], k, options.jet_order > 0 ? options.jet_order : 2 * order + 1);
  }
  auto report = obstruction(rhs, k, &star.levels, options.verify_cocycles);
  if (!(hochschild_delta(star.levels[k]) == rhs)) {
    throw InfeasibleSystem("δM_" + std::to_string(k) + " differs from R_" + std::to_string(k));
  }
  return report;
}

template <class Coeff, class Search>
BasicBuildResult<Coeff> build_in_gauge(BasicStarProduct<Coeff> star, int order, const BuildOptions& options,
                                       Search&& search) {
  if (options.gauge == Gauge::Block || order < 2) return extend_star(std::move(star), order, options);

  const int ordered_levels = std::min(order, 3);
  OrderedSearchOptions search_options;
  search_options.run_unrestricted = false;
  search_options.max_level = ordered_levels;
  if (order >= 4 || (order == 3 && options.report_next_obstruction)) search_options.max_level = 4;
  auto found = search(search_options);
  if (!found.level2_feasible || (ordered_levels >= 3 && !found.cobound_feasible)) {
    throw InfeasibleSystem("no combination of ordered index graphs solves δM_" +
                           std::to_string(found.level2_feasible ? 3 : 2) + " = R");
  }
  star.levels.push_back(*found.m2);
  if (ordered_levels >= 3) star.levels.push_back(*found.m3);
  for (int k = 2; k <= ordered_levels; ++k) star.reports.push_back(existing_level_report(star, k, order, options));
  star.order = static_cast<int>(star.levels.size()) - 1;

  if (search_options.max_level == 4 && !found.restricted_feasible) {
    BasicBuildResult<Coeff> result;
    star.reports.push_back(*found.ar4);
    result.star = std::move(star);
    result.obstructed_level = 4;
    result.ordered_search = std::move(found);
    return result;
  }
  auto result = extend_star(std::move(star), order, options);
  result.ordered_search = std::move(found);
  return result;
}

}  // namespace

BuildResult build_star_symbolic(PoissonMode mode, int order, const BuildOptions& options) {
  if (order < 1) throw std::invalid_argument("order must be >= 1");
  const int jet_bound = options.jet_order > 0 ? options.jet_order : 2 * order + 1;
  if (jet_bound < order + 1) throw std::invalid_argument("jet truncation must be at least order + 1");
  StarProduct star;
  star.mode = mode;
  star.phi_source = "sym";
  star.psi_source = mode == PoissonMode::PsiNablaPhi ? "sym" : "";
  star.levels = {multiplication<JetPolynomial>(), first_order_cochain(mode)};
  star.order = 1;
  return build_in_gauge(std::move(star), order, options,
                        [mode](const OrderedSearchOptions& o) { return ordered_search(mode, o); });
}

ExplicitBuildResult build_star_explicit(PoissonMode mode, const JetContext& context, int order,
                                        const BuildOptions& options) {
  if (order < 1) throw std::invalid_argument("order must be >= 1");
  if (mode == PoissonMode::PsiNablaPhi && !context.psi) {
    throw std::invalid_argument("the psi-nabla-phi mode needs a psi potential");
  }
  ExplicitStarProduct star;
  star.mode = mode;
  star.phi_source = to_string(context.phi);
  if (context.psi) star.psi_source = to_string(*context.psi);
  star.levels = {multiplication<Polynomial>(), specialize(first_order_cochain(mode), context)};
  star.order = 1;
  return build_in_gauge(std::move(star), order, options,
                        [mode, &context](const OrderedSearchOptions& o) { return ordered_search(mode, context, o); });
}

ExplicitStarProduct specialize(const StarProduct& star, const JetContext& context) {
  ExplicitStarProduct out;
  out.mode = star.mode;
  out.order = star.order;
  out.phi_source = to_string(context.phi);
  if (context.psi) out.psi_source = to_string(*context.psi);
  for (const auto& level : star.levels) out.levels.push_back(specialize(level, context));
  for (const auto& r : star.reports) {
    ExplicitObstructionReport e;
    e.level = r.level;
    e.method = r.method == ObstructionReport::Method::Parity ? ExplicitObstructionReport::Method::Parity
                                                              : ExplicitObstructionReport::Method::Direct;
    e.antisymmetrized = specialize(r.antisymmetrized, context);
    e.coordinate_witness = eval_jets(r.coordinate_witness, context);
    e.is_zero = e.antisymmetrized.is_zero();
    if (r.shortcut) e.shortcut = specialize(*r.shortcut, context);
    e.shortcut_agrees = !e.shortcut || *e.shortcut == e.antisymmetrized;
    out.reports.push_back(std::move(e));
  }
  return out;
}

// ---------------------------------------------------------------------------
// OPO audit

std::string_view to_string(LiftStatus status) {
  switch (status) {
    case LiftStatus::Opo:
      return "opo";
    case LiftStatus::LiftedNotOpo:
      return "lifted-not-opo";
    case LiftStatus::NotLiftable:
      return "not-liftable";
    case LiftStatus::Undetermined:
      return "undetermined";
  }
  return "undetermined";
}

namespace {

bool admissible_graph(const AbstractTerm& g, int k) {
  int total = 0;
  for (const auto& a : g.args) {
    if (a.empty()) return false;
    total += static_cast<int>(a.size());
  }
  return k < 2 || total >= 3;
}

}  // namespace

std::vector<GraphCochain> graph_basis(int k, PoissonMode mode, bool ordered_only) {
  if (k < 1) throw std::invalid_argument("graph bases start at level 1");
  std::vector<AbstractTerm> graphs;
  for (auto& g : enumerate_bilinear_graphs(k, ordered_only)) {
    if (admissible_graph(g, k)) graphs.push_back(std::move(g));
  }
  std::vector<Cochain> concrete(graphs.size(), Cochain(2));
  parallel_for(graphs.size(), [&](std::size_t i) {
    concrete[i] = parity_projection(concretize(graphs[i], mode), k);
  });
  std::vector<GraphCochain> out;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    if (!concrete[i].is_zero()) out.push_back({std::move(graphs[i]), std::move(concrete[i])});
  }
  return out;
}

std::vector<LevelAudit> opo_audit(const StarProduct& star) {
  std::vector<LevelAudit> out;
  for (int k = 0; k < static_cast<int>(star.levels.size()); ++k) {
    LevelAudit audit;
    audit.level = k;
    if (k == 0) {
      audit.status = LiftStatus::Opo;
      out.push_back(audit);
      continue;
    }
    if (k > 3) {
      out.push_back(audit);
      continue;
    }
    const Cochain& m = star.levels[k];
    const auto ordered = graph_basis(k, star.mode, true);
    const auto all = graph_basis(k, star.mode, false);
    audit.ordered_graphs = ordered.size();
    audit.all_graphs = all.size();

    SparseEchelon<FlatKey<JetPolynomial>> span;
    for (const auto& g : ordered) span.add_column(flatten(g.cochain));
    if (span.in_span(flatten(m))) {
      audit.status = LiftStatus::Opo;
    } else {
      for (const auto& g : all) span.add_column(flatten(g.cochain));
      audit.status = span.in_span(flatten(m)) ? LiftStatus::LiftedNotOpo : LiftStatus::NotLiftable;
    }
    if (k >= 2) {
      SparseEchelon<FlatKey<JetPolynomial>> images;
      for (const auto& g : ordered) images.add_column(flatten(hochschild_delta(g.cochain)));
      audit.ordered_representative = images.in_span(flatten(hochschild_delta(m)));
    }
    out.push_back(audit);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Instantiations

#define STARQ_INSTANTIATE(Coeff)                                                                         \
  template BasicCochain<Coeff> assemble_rhs(const std::vector<BasicCochain<Coeff>>&, int);              \
  template void check_cocycle(const BasicCochain<Coeff>&, int);                                          \
  template BasicObstructionReport<Coeff> obstruction(const BasicCochain<Coeff>&, int,                    \
                                                     const std::vector<BasicCochain<Coeff>>*, bool);     \
  template BasicCochain<Coeff> obstruction_shortcut(const BasicCochain<Coeff>&, const BasicCochain<Coeff>&); \
  template BasicCochain<Coeff> solve_delta(const BasicCochain<Coeff>&, int);                             \
  template BasicBuildResult<Coeff> extend_star(BasicStarProduct<Coeff>, int, const BuildOptions&);

STARQ_INSTANTIATE(JetPolynomial)
STARQ_INSTANTIATE(Polynomial)

#undef STARQ_INSTANTIATE

}  // namespace starq
