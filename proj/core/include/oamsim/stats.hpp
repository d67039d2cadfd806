// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "oamsim/channel.hpp"
#include "oamsim/thermo.hpp"

namespace oamsim {

/// Counting-noise model: Poisson shot noise per entry plus one common-mode
/// multiplicative pump fluctuation per trial (pump drifts scale every
/// coincidence together).
struct NoiseModel {
  bool poisson = true;
  double pump_sigma = 0.05;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Expected coincidence counts for a channel: E[N(l_in, l_out)] =
/// total * weight(l_in) * p(l_out | l_in), rounded to integers. Weights are
/// normalized internally; the flat overload weights all inputs equally.
CountsMatrix synth_counts(const TransitionMatrix& t, const std::vector<double>& weights,
                          long long total);
CountsMatrix synth_counts(const TransitionMatrix& t, const GibbsPopulations& g, long long total);
CountsMatrix synth_counts(const TransitionMatrix& t, long long total);

/// One Monte-Carlo resample of a counts table. Fully determined by
/// (model.seed, trial) regardless of execution order.
CountsMatrix resample(const CountsMatrix& counts, const NoiseModel& model, int trial);

/// Quantity names reported per beta, in canonical column order.
const std::vector<std::string>& band_quantities();

struct BandSeries {
  std::vector<double> lo, hi, point;  ///< per beta
};

/// Empirical per-beta confidence bands for every reported quantity.
struct ConfidenceBand {
  std::vector<double> betas;
  double level = 0.95;
  int trials = 0;
  std::vector<std::pair<std::string, BandSeries>> bands;  ///< canonical order

  const BandSeries& series(const std::string& name) const;
};

/// The analysis recipe a band wraps: counts in, per-beta reports out.
using AnalysisPipeline = std::function<std::vector<ThermoReport>(const CountsMatrix&)>;

/// Runs the full counts -> transition -> thermodynamics pipeline per trial
/// and returns empirical [(1-level)/2, (1+level)/2] quantiles per beta per
/// quantity. Any trial failure aborts the whole band (no silent dropping).
ConfidenceBand confidence_band(const CountsMatrix& counts, const AnalysisPipeline& pipeline,
                               const NoiseModel& model, int trials, double level = 0.95,
                               int workers = 0);

}  // namespace oamsim
