#include <benchmark/benchmark.h>

#include "finsler/catalog.hpp"
#include "finsler/curvature.hpp"
#include "finsler/randers.hpp"
#include "finsler/riemann.hpp"
#include "finsler/sampling.hpp"

using namespace finsler;

static void BM_JetMultiply(benchmark::State& state) {
  const auto sp = JetSpace::get(4, 4, {2, static_cast<int>(state.range(0))});
  const std::vector<double> z{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  const auto v = seed_variables(sp, 0, z);
  const Jet a = sin(v[0] * v[4]) + v[1];
  const Jet b = exp(v[2] - v[5]);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
  state.counters["monomials"] = static_cast<double>(sp->size());
}
BENCHMARK(BM_JetMultiply)->Arg(2)->Arg(4)->Arg(6);

static void BM_CurvatureBundle(benchmark::State& state) {
  const SolutionEntry e = catalog_get(state.range(0) == 0 ? "funk" : "kerr_randers");
  const auto s = sample_points(e, 1, 1).front();
  for (auto _ : state) benchmark::DoNotOptimize(curvature_bundle(e.metric, as_span(s.x), as_span(s.y)));
  state.SetLabel(e.name);
}
BENCHMARK(BM_CurvatureBundle)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_RandersClosedForm(benchmark::State& state) {
  const RandersData d = random_randers_data(1);
  const std::vector<double> x{0.1, -0.2, 0.3}, y{0.6, 0.0, 0.8};
  for (auto _ : state) benchmark::DoNotOptimize(randers_ricci_closed_form(d, x, y));
}
BENCHMARK(BM_RandersClosedForm)->Unit(benchmark::kMillisecond);

static void BM_PrioriFormulae(benchmark::State& state) {
  const RandersData d = random_randers_data(1);
  const std::vector<double> x{0.1, -0.2, 0.3}, y{0.6, 0.0, 0.8};
  for (auto _ : state) benchmark::DoNotOptimize(check_priori_formulae(d.alpha, d.beta, x, y));
}
BENCHMARK(BM_PrioriFormulae)->Unit(benchmark::kMillisecond);

static void BM_VerifyFunk(benchmark::State& state) {
  const SolutionEntry e = catalog_get("funk");
  VerifyOptions o;
  o.samples = 100;
  o.seed = 7;
  for (auto _ : state) benchmark::DoNotOptimize(verify_solution(e, o));
}
BENCHMARK(BM_VerifyFunk)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
