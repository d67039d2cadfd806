// SPDX-License-Identifier: Apache-2.0
#include "oamsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "oamsim/errors.hpp"
#include "oamsim/parallel.hpp"
#include "oamsim/rng.hpp"

namespace oamsim {

void NoiseModel::validate() const {
  if (!(pump_sigma >= 0.0) || pump_sigma >= 0.5)
    throw ValidationError("noise: pump_sigma must be in [0, 0.5)");
}

CountsMatrix synth_counts(const TransitionMatrix& t, const std::vector<double>& weights,
                          long long total) {
  if (total <= 0) throw ValidationError("synth_counts: total must be positive");
  const int d = t.dim();
  if (static_cast<int>(weights.size()) != d)
    throw ValidationError("synth_counts: weights size does not match dim");
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ValidationError("synth_counts: negative weight");
    wsum += w;
  }
  if (!(wsum > 0.0)) throw ValidationError("synth_counts: weights sum to zero");

  CountsMatrix counts;
  counts.l_max = t.l_max;
  counts.counts.resize(d, d);
  for (int i = 0; i < d; ++i) {
    const double row_weight = weights[static_cast<std::size_t>(i)] / wsum;
    for (int j = 0; j < d; ++j)
      counts.counts(i, j) = std::llround(static_cast<double>(total) * row_weight * t.p(j, i));
  }
  return counts;
}

CountsMatrix synth_counts(const TransitionMatrix& t, const GibbsPopulations& g, long long total) {
  if (g.l_max != t.l_max)
    throw ValidationError("synth_counts: populations do not match matrix dim");
  return synth_counts(t, g.p, total);
}

CountsMatrix synth_counts(const TransitionMatrix& t, long long total) {
  return synth_counts(t, std::vector<double>(static_cast<std::size_t>(t.dim()), 1.0), total);
}

CountsMatrix resample(const CountsMatrix& counts, const NoiseModel& model, int trial) {
  model.validate();
  GaussianStream rng(derive_seed(model.seed, {static_cast<std::uint64_t>(trial)}));

  double pump = 1.0;
  if (model.pump_sigma > 0.0) pump = std::max(0.0, 1.0 + model.pump_sigma * rng.normal());

  CountsMatrix out = counts;
  const int d = counts.dim();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double mean = static_cast<double>(counts.counts(i, j)) * pump;
      if (model.poisson) {
        std::poisson_distribution<std::int64_t> draw(mean);
        out.counts(i, j) = mean > 0.0 ? draw(rng.engine()) : 0;
      } else {
        out.counts(i, j) = std::llround(mean);
      }
    }
  }
  return out;
}

const std::vector<std::string>& band_quantities() {
  static const std::vector<std::string> names = {
      "jarzynski", "delta", "mean_work", "bound", "deviation_generalized", "deviation_classic"};
  return names;
}

namespace {

double quantity_of(const ThermoReport& r, std::size_t q) {
  switch (q) {
    case 0: return r.jarzynski;
    case 1: return r.delta;
    case 2: return r.mean_work;
    case 3: return r.bound;
    case 4: return r.deviation_generalized;
    default: return r.deviation_classic;
  }
}

double empirical_quantile(std::vector<double>& sorted, double q) {
  std::sort(sorted.begin(), sorted.end());
  const double h = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

const BandSeries& ConfidenceBand::series(const std::string& name) const {
  for (const auto& [key, series] : bands)
    if (key == name) return series;
  throw ValidationError("confidence band: unknown quantity '" + name + "'");
}

ConfidenceBand confidence_band(const CountsMatrix& counts, const AnalysisPipeline& pipeline,
                               const NoiseModel& model, int trials, double level, int workers) {
  model.validate();
  if (trials < 100) throw ValidationError("confidence_band: need >= 100 trials");
  if (!(level > 0.0 && level < 1.0))
    throw ValidationError("confidence_band: level must be in (0, 1)");

  const std::vector<ThermoReport> point = pipeline(counts);
  if (point.empty()) throw ValidationError("confidence_band: pipeline produced no reports");
  const std::size_t n_betas = point.size();
  const std::size_t n_q = band_quantities().size();

  // samples[trial] is a flat (quantity, beta) table; each trial owns its slot.
  std::vector<std::vector<double>> samples(static_cast<std::size_t>(trials));
  parallel_for(
      static_cast<std::size_t>(trials),
      [&](std::size_t t) {
        const std::vector<ThermoReport> reports =
            pipeline(resample(counts, model, static_cast<int>(t)));
        if (reports.size() != n_betas)
          throw InvariantError("confidence_band: trial report length mismatch");
        std::vector<double> row(n_q * n_betas);
        for (std::size_t q = 0; q < n_q; ++q)
          for (std::size_t b = 0; b < n_betas; ++b)
            row[q * n_betas + b] = quantity_of(reports[b], q);
        samples[t] = std::move(row);
      },
      workers);

  ConfidenceBand band;
  band.level = level;
  band.trials = trials;
  band.betas.reserve(n_betas);
  for (const ThermoReport& r : point) band.betas.push_back(r.beta);

  const double q_lo = (1.0 - level) / 2.0;
  const double q_hi = (1.0 + level) / 2.0;
  for (std::size_t q = 0; q < n_q; ++q) {
    BandSeries series;
    series.lo.resize(n_betas);
    series.hi.resize(n_betas);
    series.point.resize(n_betas);
    for (std::size_t b = 0; b < n_betas; ++b) {
      std::vector<double> column(static_cast<std::size_t>(trials));
      for (std::size_t t = 0; t < samples.size(); ++t) column[t] = samples[t][q * n_betas + b];
      std::vector<double> sorted = column;
      series.lo[b] = empirical_quantile(sorted, q_lo);
      series.hi[b] = empirical_quantile(sorted, q_hi);
      series.point[b] = quantity_of(point[b], q);
    }
    band.bands.emplace_back(band_quantities()[q], std::move(series));
  }
  return band;
}

}  // namespace oamsim
