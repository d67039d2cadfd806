// SPDX-License-Identifier: Apache-2.0
#include "oamsim/thermo.hpp"

#include <cmath>
#include <string>

#include "oamsim/errors.hpp"

namespace oamsim {

namespace {
constexpr double kIdentityTolerance = 1e-10;

void require_matching(const TransitionMatrix& t, const GibbsPopulations& g) {
  if (t.l_max != g.l_max)
    throw ValidationError("thermo: transition matrix and populations disagree on l_max");
}
}  // namespace

GibbsPopulations gibbs(double beta, int l_max) {
  if (!(beta > 0.0)) throw ValidationError("gibbs: beta must be positive");
  if (l_max < 1) throw ValidationError("gibbs: l_max must be >= 1");
  const EnergySpectrum spectrum{l_max};
  GibbsPopulations g{beta, l_max, std::vector<double>(2 * l_max + 1, 0.0), 0.0};
  // Populations via weights exp(-beta |l|) for numerical headroom; the
  // common exp(-beta) factor cancels in the normalization.
  double weight_sum = 0.0;
  for (int ell = -l_max; ell <= l_max; ++ell) {
    const double w = std::exp(-beta * std::abs(ell));
    g.p[static_cast<std::size_t>(ell + l_max)] = w;
    weight_sum += w;
    g.z_trunc += std::exp(-beta * spectrum.energy(ell));
  }
  for (double& v : g.p) v /= weight_sum;
  return g;
}

int work_value(int l_in, int l_out, int l_max) {
  if (std::abs(l_in) > l_max || std::abs(l_out) > l_max)
    throw ValidationError("work_value: mode index outside truncation");
  return std::abs(l_out) - std::abs(l_in);
}

WorkDistribution work_distribution(const TransitionMatrix& t, const GibbsPopulations& g) {
  require_matching(t, g);
  const int l_max = t.l_max;
  WorkDistribution w{l_max, std::vector<double>(2 * l_max + 1, 0.0)};
  for (int l_in = -l_max; l_in <= l_max; ++l_in) {
    const double p_in = g.prob(l_in);
    for (int l_out = -l_max; l_out <= l_max; ++l_out) {
      const int work = work_value(l_in, l_out, l_max);
      w.prob[static_cast<std::size_t>(work + l_max)] += p_in * t.at(l_out, l_in);
    }
  }
  return w;
}

double jarzynski_average(const WorkDistribution& w, double beta) {
  double acc = 0.0;
  for (int work = -w.l_max; work <= w.l_max; ++work)
    acc += w.prob_of(work) * std::exp(-beta * work);
  return acc;
}

double delta_nonunital(const TransitionMatrix& t, const GibbsPopulations& g) {
  require_matching(t, g);
  double delta = 0.0;
  for (int l_out = -t.l_max; l_out <= t.l_max; ++l_out) {
    const double row_sum = t.p.row(t.index(l_out)).sum();
    delta += g.prob(l_out) * (row_sum - 1.0);
  }
  return delta;
}

ThermoReport generalized_jarzynski_check(const TransitionMatrix& t, double beta) {
  const GibbsPopulations g = gibbs(beta, t.l_max);
  const WorkDistribution w = work_distribution(t, g);

  ThermoReport report;
  report.beta = beta;
  report.delta_f = 0.0;
  report.jarzynski = jarzynski_average(w, beta);
  report.delta = delta_nonunital(t, g);
  for (int work = -t.l_max; work <= t.l_max; ++work)
    report.mean_work += w.prob_of(work) * work;
  if (!(1.0 + report.delta > 0.0))
    throw InvariantError("thermo: 1 + delta = " + std::to_string(1.0 + report.delta) +
                         " is not positive");
  report.bound = -std::log1p(report.delta) / beta;
  report.deviation_generalized = report.jarzynski - (1.0 + report.delta);
  report.deviation_classic = report.jarzynski - 1.0;
  if (std::abs(report.deviation_generalized) > kIdentityTolerance)
    throw InvariantError("thermo: generalized fluctuation identity breached (deviation " +
                         std::to_string(report.deviation_generalized) +
                         "); this is an implementation bug");
  return report;
}

SecondLawReport second_law_report(const TransitionMatrix& t, double beta) {
  const ThermoReport report = generalized_jarzynski_check(t, beta);
  return SecondLawReport{report.mean_work, report.bound, report.mean_work - report.bound};
}

}  // namespace oamsim
