//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "fabind/kernels.h"
#include "fabind/rng.h"

namespace {

using namespace fabind;

std::vector<double> random_matrix(Rng &rng, int n) {
  std::vector<double> v(static_cast<std::size_t>(n) * n);
  for (auto &x: v)
    x = rng.uniform(-1, 1);
  return v;
}

std::vector<Vec3> random_points(Rng &rng, int n, double box) {
  std::vector<Vec3> v(n);
  for (auto &p: v)
    p = Vec3(rng.uniform(0, box), rng.uniform(0, box), rng.uniform(0, box));
  return v;
}

template <bool Parallel>
void BM_Matmul(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  const auto a = random_matrix(rng, n), b = random_matrix(rng, n);
  std::vector<double> c(static_cast<std::size_t>(n) * n);
  for (auto _: state) {
    if constexpr (Parallel)
      kernels::matmul(a, b, c, n, n, n, false);
    else
      kernels::serial::matmul(a, b, c, n, n, n, false);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * 2LL * n * n * n);
}

template <bool Parallel>
void BM_RadiusPairs(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  const auto pts = random_points(rng, n, 60.0);
  for (auto _: state) {
    auto e = Parallel ? kernels::radius_pairs(pts, pts, 8.0, kernels::EdgeMode::kInternal)
                      : kernels::serial::radius_pairs(pts, pts, 8.0,
                                                      kernels::EdgeMode::kInternal);
    benchmark::DoNotOptimize(e.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(n) * n);
}

BENCHMARK(BM_Matmul<false>)->Arg(64)->Arg(256)->Arg(512)->UseRealTime();
BENCHMARK(BM_Matmul<true>)->Arg(64)->Arg(256)->Arg(512)->UseRealTime();
BENCHMARK(BM_RadiusPairs<false>)->Arg(500)->Arg(2000)->Arg(8000)->UseRealTime();
BENCHMARK(BM_RadiusPairs<true>)->Arg(500)->Arg(2000)->Arg(8000)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
