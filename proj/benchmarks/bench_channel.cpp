// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "oamsim/channel.hpp"

namespace {

oamsim::ChannelConfig small_config() {
  oamsim::ChannelConfig config;
  config.grid = oamsim::make_grid(128, 12.0);
  config.l_max = 5;
  config.strength = 2.0;
  config.n_masks = 4;
  return config;
}

void BM_MaskAmplitudeMatrix(benchmark::State& state) {
  oamsim::ChannelConfig config;
  config.grid = oamsim::make_grid(static_cast<int>(state.range(0)), 12.0);
  config.l_max = static_cast<int>(state.range(1));
  config.strength = 2.0;
  const oamsim::ModeBank bank(config.grid, config.w0, config.l_max);
  const oamsim::MaskRealization mask = oamsim::make_mask(config, 0);
  for (auto _ : state) {
    auto amps = oamsim::mask_amplitude_matrix(bank, mask);
    benchmark::DoNotOptimize(amps.data());
  }
}
BENCHMARK(BM_MaskAmplitudeMatrix)->Args({128, 5})->Args({256, 10});

void BM_EstimateChannel(benchmark::State& state) {
  const oamsim::ChannelConfig config = small_config();
  const oamsim::ModeBank bank(config.grid, config.w0, config.l_max);
  for (auto _ : state) {
    auto estimate = oamsim::estimate_channel(bank, config, 1);
    benchmark::DoNotOptimize(estimate.raw.data());
  }
}
BENCHMARK(BM_EstimateChannel);

}  // namespace
