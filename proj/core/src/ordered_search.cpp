#include "starq/star.hpp"

#include <chrono>
#include <functional>
#include <set>

#include "starq/error.hpp"
#include "starq/parallel.hpp"

namespace starq {

namespace {

template <class Coeff>
using Convert = std::function<BasicCochain<Coeff>(const Cochain&)>;

template <class Coeff>
BasicOrderedSearchReport<Coeff> run(PoissonMode mode, const OrderedSearchOptions& options,
                                    const Convert<Coeff>& convert) {
  if (options.max_level < 2 || options.max_level > 4) {
    throw std::invalid_argument("the ordered search covers levels 2 to 4");
  }
  const auto start = std::chrono::steady_clock::now();
  BasicOrderedSearchReport<Coeff> report;
  report.mode = mode;
  report.max_level = options.max_level;

  const BasicCochain<Coeff> m0 = multiplication<Coeff>();
  const BasicCochain<Coeff> m1 = convert(first_order_cochain(mode));

  std::vector<AbstractTerm> graphs2;
  std::vector<BasicCochain<Coeff>> g2;
  for (auto& [graph, cochain] : graph_basis(2, mode, true)) {
    auto c = convert(cochain);
    if (c.is_zero()) continue;
    graphs2.push_back(graph);
    g2.push_back(std::move(c));
  }
  std::vector<AbstractTerm> graphs3;
  std::vector<BasicCochain<Coeff>> g3;
  if (options.max_level >= 3) {
    for (auto& [graph, cochain] : graph_basis(3, mode, true)) {
      auto c = convert(cochain);
      if (c.is_zero()) continue;
      graphs3.push_back(graph);
      g3.push_back(std::move(c));
    }
  }
  for (const auto& g : graphs2) report.level2_graphs.push_back(to_string(g));
  for (const auto& g : graphs3) report.level3_graphs.push_back(to_string(g));

  // Block 1: δM_2 = R_2. Block 2: δM_3 − M_1∘M_2 − M_2∘M_1 = 0. Block 3: AR_4 = 0.
  using Key = FlatKey<Coeff>;
  using Column = std::map<Key, Rational>;
  std::vector<Column> columns2(g2.size());
  std::vector<Column> columns3(g3.size());
  parallel_for(g2.size(), [&](std::size_t i) {
    flatten_into(columns2[i], hochschild_delta(g2[i]), 1);
    if (options.max_level >= 3) {
      flatten_into(columns2[i], gerstenhaber_product(m1, g2[i]), 2, Rational(-1));
      flatten_into(columns2[i], gerstenhaber_product(g2[i], m1), 2, Rational(-1));
    }
  });
  parallel_for(g3.size(), [&](std::size_t j) {
    flatten_into(columns3[j], hochschild_delta(g3[j]), 2);
    if (options.max_level >= 4) {
      auto r4 = gerstenhaber_product(g3[j], m1) + gerstenhaber_product(m1, g3[j]);
      flatten_into(columns3[j], antisymmetrize(degree_part(r4, {1, 1, 1})), 3);
    }
  });
  Column target_map;
  flatten_into(target_map, gerstenhaber_product(m1, m1), 1);
  const auto target = to_sparse(target_map);

  auto restricted = [](const Column& c, int max_block) {
    Column out;
    for (const auto& [key, value] : c) {
      if (std::get<0>(key) <= max_block) out.emplace(key, value);
    }
    return to_sparse(out);
  };
  struct Stage {
    bool feasible = false;
    SparseVector<std::size_t> solution;
    std::size_t rank = 0;
    std::size_t equations = 0;
  };
  auto solve_stage = [&](int max_block) {
    Stage stage;
    SparseEchelon<Key> echelon;
    std::set<Key> rows;
    for (const auto& [key, value] : target_map) rows.insert(key);
    for (const auto& c : columns2) {
      auto v = restricted(c, max_block);
      for (const auto& [key, value] : v) rows.insert(key);
      echelon.add_column(std::move(v));
    }
    if (max_block >= 2) {
      for (const auto& c : columns3) {
        auto v = restricted(c, max_block);
        for (const auto& [key, value] : v) rows.insert(key);
        echelon.add_column(std::move(v));
      }
    }
    stage.rank = echelon.rank();
    stage.equations = rows.size();
    if (auto x = echelon.solve(target)) {
      stage.feasible = true;
      stage.solution = std::move(*x);
    }
    return stage;
  };

  auto assemble = [&](const SparseVector<std::size_t>& x, std::vector<Rational>& a, std::vector<Rational>& b) {
    a.assign(g2.size(), Rational(0));
    b.assign(g3.size(), Rational(0));
    for (const auto& [index, value] : x) {
      if (index < g2.size()) {
        a[index] = value;
      } else {
        b[index - g2.size()] = value;
      }
    }
    BasicCochain<Coeff> m2(2);
    for (std::size_t i = 0; i < g2.size(); ++i) m2.add_scaled(g2[i], a[i]);
    BasicCochain<Coeff> m3(2);
    for (std::size_t j = 0; j < g3.size(); ++j) m3.add_scaled(g3[j], b[j]);
    return std::make_pair(m2, m3);
  };

  std::vector<Stage> stages;
  for (int block = 1; block <= options.max_level - 1; ++block) {
    stages.push_back(solve_stage(block));
    if (!stages.back().feasible) break;
  }
  report.level2_feasible = stages[0].feasible;
  report.cobound_feasible = stages.size() >= 2 && stages[1].feasible;
  report.restricted_feasible = static_cast<int>(stages.size()) == options.max_level - 1 && stages.back().feasible;
  report.rank = stages.back().rank;
  report.equations = stages.back().equations;

  const Stage* deepest = nullptr;
  for (const auto& s : stages) {
    if (s.feasible) deepest = &s;
  }
  if (deepest) {
    auto [m2, m3] = assemble(deepest->solution, report.level2_coefficients, report.level3_coefficients);
    report.m2 = std::move(m2);
    if (options.max_level >= 3) report.m3 = std::move(m3);
    if (options.max_level >= 4 && report.cobound_feasible) {
      const std::vector<BasicCochain<Coeff>> levels{m0, m1, *report.m2, *report.m3};
      report.ar4 = obstruction(assemble_rhs(levels, 4), 4, &levels);
    }
  }

  if (options.run_unrestricted) {
    BasicStarProduct<Coeff> star;
    star.mode = mode;
    star.levels = {m0, m1};
    BuildOptions build;
    build.jet_order = 5;
    build.report_next_obstruction = true;
    try {
      auto built = extend_star(std::move(star), 3, build);
      report.unrestricted_feasible = built.star.order >= 3;
      if (built.star.order >= 3 && built.star.reports.size() >= 3) {
        report.unrestricted_ar4_zero = built.star.reports.back().is_zero;
      }
    } catch (const InfeasibleSystem&) {
      report.unrestricted_feasible = false;
    }
  }

  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace

OrderedSearchReport ordered_search(PoissonMode mode, const OrderedSearchOptions& options) {
  return run<JetPolynomial>(mode, options, [](const Cochain& c) { return c; });
}

ExplicitOrderedSearchReport ordered_search(PoissonMode mode, const JetContext& context,
                                           const OrderedSearchOptions& options) {
  if (mode == PoissonMode::PsiNablaPhi && !context.psi) {
    throw std::invalid_argument("the psi-nabla-phi mode needs a psi potential");
  }
  return run<Polynomial>(mode, options, [&context](const Cochain& c) { return specialize(c, context); });
}

}  // namespace starq
