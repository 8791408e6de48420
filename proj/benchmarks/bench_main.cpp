#include <benchmark/benchmark.h>

#include <memory>

#include "nodal/bubbles.hpp"
#include "nodal/constants.hpp"
#include "nodal/radial_ode.hpp"
#include "nodal/specfun.hpp"
#include "nodal/verify.hpp"

static void BM_LambertW(benchmark::State& state) {
  double x = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nodal::specfun::lambert_w0(x));
    x = x < 1e6 ? x * 1.37 : 0.01;
  }
}
BENCHMARK(BM_LambertW);

static void BM_ThetaSequence(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(nodal::constants::theta_sequence(k));
  state.SetComplexityN(k);
}
BENCHMARK(BM_ThetaSequence)->RangeMultiplier(10)->Range(100, 1000000)->Complexity();

static void BM_ConstantTable(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto t = nodal::constants::theta_sequence(m);
  for (auto _ : state) benchmark::DoNotOptimize(nodal::constants::constant_table(t, m));
}
BENCHMARK(BM_ConstantTable)->Arg(25)->Arg(200);

static void BM_BubbleMass(benchmark::State& state) {
  const auto z = nodal::bubbles::make_bubble(static_cast<int>(state.range(0)), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(nodal::bubbles::bubble_mass(z));
}
BENCHMARK(BM_BubbleMass)->Arg(0)->Arg(1)->Arg(10);

static void BM_SolveWholePlane(benchmark::State& state) {
  const double p = static_cast<double>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(nodal::radial::solve_whole_plane(p, 0.0, m));
}
BENCHMARK(BM_SolveWholePlane)->Args({50, 1})->Args({200, 3})->Args({1000, 5})
    ->Unit(benchmark::kMicrosecond);

static void BM_ConvergenceReport(benchmark::State& state) {
  const std::vector<double> ps{50.0, 100.0, 200.0, 400.0};
  nodal::verify::VerifyOptions opt;
  opt.parallel = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        nodal::verify::convergence_report(3, 0.0, nodal::verify::Problem::dirichlet, ps, opt));
  }
}
BENCHMARK(BM_ConvergenceReport)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
