// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "oamsim/grid.hpp"
#include "oamsim/turbulence.hpp"

namespace {

void BM_KolmogorovScreen(benchmark::State& state) {
  const oamsim::GridSpec grid = oamsim::make_grid(static_cast<int>(state.range(0)), 12.0);
  const oamsim::ScreenOptions options{static_cast<int>(state.range(1))};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto screen = oamsim::kolmogorov_screen(grid, 0.5, seed++, options);
    benchmark::DoNotOptimize(screen.phase.data());
  }
}
BENCHMARK(BM_KolmogorovScreen)->Args({128, 3})->Args({256, 0})->Args({256, 3});

}  // namespace
