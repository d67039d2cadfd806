// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <random>

#include "oamsim/runner.hpp"
#include "oamsim/thermo.hpp"

namespace {

oamsim::TransitionMatrix random_stochastic(int l_max, std::uint64_t seed) {
  const int d = 2 * l_max + 1;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  oamsim::TransitionMatrix t = oamsim::TransitionMatrix::identity(l_max);
  for (int c = 0; c < d; ++c) {
    double sum = 0.0;
    for (int r = 0; r < d; ++r) {
      t.p(r, c) = uniform(rng);
      sum += t.p(r, c);
    }
    t.p.col(c) /= sum;
  }
  return t;
}

void BM_GeneralizedJarzynskiCheck(benchmark::State& state) {
  const auto t = random_stochastic(static_cast<int>(state.range(0)), 99);
  for (auto _ : state) {
    auto report = oamsim::generalized_jarzynski_check(t, 3.0);
    benchmark::DoNotOptimize(report.jarzynski);
  }
}
BENCHMARK(BM_GeneralizedJarzynskiCheck)->Arg(1)->Arg(10);

void BM_ThermoCurve(benchmark::State& state) {
  const auto t = random_stochastic(10, 7);
  std::vector<double> betas;
  for (int i = 1; i <= 120; ++i) betas.push_back(0.05 * i);
  for (auto _ : state) {
    auto curve = oamsim::thermo_curve(t, betas);
    benchmark::DoNotOptimize(curve.data());
  }
}
BENCHMARK(BM_ThermoCurve);

}  // namespace
