// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "oamsim/grid.hpp"
#include "oamsim/modes.hpp"

namespace {

void BM_LgModeSynthesis(benchmark::State& state) {
  const oamsim::GridSpec grid = oamsim::make_grid(static_cast<int>(state.range(0)), 12.0);
  for (auto _ : state) {
    auto mode = oamsim::lg_mode(grid, {8, 0}, 1.0);
    benchmark::DoNotOptimize(mode.values.data());
  }
}
BENCHMARK(BM_LgModeSynthesis)->Arg(128)->Arg(256);

void BM_ModeBankBuild(benchmark::State& state) {
  const oamsim::GridSpec grid = oamsim::default_grid();
  for (auto _ : state) {
    oamsim::ModeBank bank(grid, 1.0, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(bank.matrix().data());
  }
}
BENCHMARK(BM_ModeBankBuild)->Arg(5)->Arg(10);

void BM_Overlap(benchmark::State& state) {
  const oamsim::GridSpec grid = oamsim::default_grid();
  const auto a = oamsim::lg_mode(grid, {3, 0}, 1.0);
  const auto b = oamsim::lg_mode(grid, {-3, 0}, 1.0);
  for (auto _ : state) {
    auto v = oamsim::overlap(a, b);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_Overlap);

}  // namespace
