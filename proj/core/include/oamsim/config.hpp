// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "oamsim/channel.hpp"
#include "oamsim/stats.hpp"

namespace oamsim {

/// Inclusive arithmetic grid of inverse temperatures.
struct BetaGrid {
  double start = 0.05;
  double stop = 6.0;
  double step = 0.05;

  std::vector<double> expand() const;
};

/// Everything a run needs. Round-trips losslessly through JSON.
struct RunConfig {
  int grid_n = 256;
  double side_length = 12.0;
  double w0 = 1.0;
  int l_max = 10;
  std::vector<double> strengths;  ///< scintillation sweep, default 0 to 4 step 0.2
  int n_masks = 30;
  std::vector<Sidedness> sidedness = {Sidedness::Single};
  double separation_z = 0.0;
  std::vector<Direction> directions = {Direction::Forward};
  BetaGrid betas;
  bool noise_poisson = true;
  double pump_sigma = 0.05;
  std::uint64_t noise_seed = 1;
  int trials = 1000;
  long long total_counts = 1'000'000;
  std::uint64_t master_seed = 1;
  std::string output_dir = "out";
  int threads = 0;  ///< 0 = all hardware threads; never changes results

  GridSpec grid() const;
  NoiseModel noise() const;
  std::vector<double> beta_values() const { return betas.expand(); }
  void validate() const;
};

/// The sweep the whole pipeline defaults to: strengths 0:0.2:4, 30 masks,
/// single-sided forward channels, |l| <= 10 on the 256^2 grid.
RunConfig default_run_config();

std::vector<double> default_strengths();

std::string run_config_to_json_string(const RunConfig& config);
RunConfig run_config_from_json_string(const std::string& text);

/// Loads a JSON config file; unknown keys are rejected so typos surface.
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace oamsim
