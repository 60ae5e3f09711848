#include <benchmark/benchmark.h>

#include "starq/expression.hpp"
#include "starq/star.hpp"
#include "starq/verification.hpp"

namespace {

using namespace starq;

const StarProduct& symbolic_star() {
  static const StarProduct star = build_star_symbolic(PoissonMode::NablaPhi, 3).star;
  return star;
}

void BM_HochschildDelta(benchmark::State& state) {
  const Cochain& m = symbolic_star().levels[state.range(0)];
  for (auto _ : state) benchmark::DoNotOptimize(hochschild_delta(m));
}
BENCHMARK(BM_HochschildDelta)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_GerstenhaberBracket(benchmark::State& state) {
  const auto& levels = symbolic_star().levels;
  const int l = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gerstenhaber_bracket(levels[1], levels[l]));
}
BENCHMARK(BM_GerstenhaberBracket)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_SolveDelta(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const Cochain rhs = assemble_rhs(symbolic_star().levels, k);
  for (auto _ : state) benchmark::DoNotOptimize(solve_delta(rhs, k));
}
BENCHMARK(BM_SolveDelta)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_BuildSymbolic(benchmark::State& state) {
  BuildOptions options;
  options.gauge = state.range(1) ? Gauge::Ordered : Gauge::Block;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_star_symbolic(PoissonMode::NablaPhi, static_cast<int>(state.range(0)), options));
  }
}
BENCHMARK(BM_BuildSymbolic)->Args({3, 0})->Args({3, 1})->Unit(benchmark::kMillisecond);

void BM_AssociatorScan(benchmark::State& state) {
  const JetContext ctx{parse_polynomial("x1*x2*x3"), std::nullopt};
  const ExplicitStarProduct star = specialize(symbolic_star(), ctx);
  const int degree = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(find_associator_failure(star, degree, 3));
  state.counters["triples"] = static_cast<double>(monomial_triple_count(degree));
}
BENCHMARK(BM_AssociatorScan)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
