#include <benchmark/benchmark.h>

#include <cmath>

#include "wallach/equilibria.hpp"
#include "wallach/integrate.hpp"
#include "wallach/surfaces.hpp"

using namespace wallach;

namespace {

Scalar R(long n, long d) { return Scalar::ratio(n, d); }

void q_eval_double(benchmark::State& state) {
  std::array<double, 3> a{0.17, 0.23, 0.31};
  for (auto _ : state) {
    benchmark::DoNotOptimize(q_eval(a));
    a[0] += 1e-9;
  }
}
BENCHMARK(q_eval_double);

void q_eval_exact(benchmark::State& state) {
  const Parameters p(R(5, 36), R(1, 6), R(1, 4));
  for (auto _ : state) benchmark::DoNotOptimize(q_eval(p));
}
BENCHMARK(q_eval_exact);

void solve_all_case(benchmark::State& state, Parameters p) {
  for (auto _ : state) benchmark::DoNotOptimize(solve_all(p));
}
BENCHMARK_CAPTURE(solve_all_case, two_equal_exact, Parameters(R(1, 6), R(1, 6), R(1, 6)));
BENCHMARK_CAPTURE(solve_all_case, sum_half_exact, Parameters(R(1, 10), R(3, 20), R(1, 4)));
BENCHMARK_CAPTURE(solve_all_case, general_exact, Parameters(R(1, 6), R(1, 4), R(1, 3)));
BENCHMARK_CAPTURE(solve_all_case, general_float, Parameters(0.17, 0.23, 0.31));

void solve_all_no_census(benchmark::State& state) {
  const Parameters p(0.17, 0.23, 0.31);
  SolveOptions o;
  o.numeric_census = false;
  for (auto _ : state) benchmark::DoNotOptimize(solve_all(p, o));
}
BENCHMARK(solve_all_no_census);

void integrate_reduced(benchmark::State& state) {
  const Parameters p(R(7, 15), R(7, 15), R(7, 15));
  IntegrateOptions o;
  o.t_max = 50;
  o.rel_tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_flow(p, {1.3, 0.8}, o));
}
BENCHMARK(integrate_reduced)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void integrate_3d(benchmark::State& state) {
  const Parameters p(R(1, 6), R(1, 4), R(1, 3));
  IntegrateOptions o;
  o.t_max = 50;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_flow_3d(p, {1.3, 0.8, 1.1}, o));
}
BENCHMARK(integrate_3d)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
