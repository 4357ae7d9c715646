#include <benchmark/benchmark.h>

#include <vector>

#include "loopeq/kernels.hpp"
#include "loopeq/oracles.hpp"

using namespace loopeq;

namespace {

Exec mode(const benchmark::State& s) { return s.range(0) ? Exec::parallel : Exec::serial; }

void label(benchmark::State& s) { s.SetLabel(s.range(0) ? "parallel" : "serial"); }

void BM_genus_histogram(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(genus_histogram(7, mode(s)));
  label(s);
}

void BM_kernel_diagonal(benchmark::State& s) {
  ExternalField f = build_field(4, {0.0, 0.0, 0.0, 0.05}, 4, 0);
  const int N = 200;
  Recurrence rec = orthogonal_recurrence(f, N, N);
  std::vector<double> xs(4000);
  for (int i = 0; i < 4000; ++i) xs[i] = -3.5 + 7.0 * i / 3999;
  auto lw = [&](double x) { return -N * (f.potential(x) - rec.vmin); };
  for (auto _ : s) benchmark::DoNotOptimize(kernel_diagonal(rec, N, lw, xs, mode(s)));
  label(s);
}

void BM_ward2_sums(benchmark::State& s) {
  ExternalField f = build_field(4, {0.0, 0.0, 0.0, 0.05}, 4, 0);
  for (auto _ : s) benchmark::DoNotOptimize(ward2_sums(f, cplx(0.0, 2.0), 24, mode(s)));
  label(s);
}

void BM_contour_residual(benchmark::State& s) {
  LoopOptions o;
  o.g_max = 2;
  LoopHierarchy h = solve_hierarchy(build_field(4, {0.0, 0.0, 0.0, 0.05}, 4, 0), o);
  ContourSpec c = ContourSpec::around(h.eq.cut(), 2.0, 1024);
  for (auto _ : s) benchmark::DoNotOptimize(contour_residual(h, 2, c, residual_samples(h.eq.cut()), mode(s)));
  label(s);
}

}  // namespace

BENCHMARK(BM_genus_histogram)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kernel_diagonal)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ward2_sums)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_contour_residual)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
