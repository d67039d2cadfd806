// SPDX-License-Identifier: Apache-2.0
#include "oamsim/turbulence.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "oamsim/errors.hpp"
#include "oamsim/fft.hpp"
#include "oamsim/rng.hpp"

namespace oamsim {

namespace {
constexpr double kPsdConstant = 0.023;  // phase PSD: 0.023 r0^(-5/3) f^(-11/3)
constexpr double kSfConstant = 6.88;    // matching structure function constant

// Average of (u^2 + v^2)^(-11/6) over a square cell of width `w` centered at
// (cx, cy), in frequency-grid units. Midpoint subsampling; the spectrum is so
// steep near the origin that assigning each cell its integrated power (not
// the center value) is what keeps the synthesized structure function on the
// analytic law.
double cell_average(double cx, double cy, double w, int subsamples) {
  if (subsamples == 1) return std::pow(cx * cx + cy * cy, -11.0 / 6.0);
  double acc = 0.0;
  for (int s = 0; s < subsamples; ++s) {
    const double u = cx + w * ((s + 0.5) / subsamples - 0.5);
    for (int t = 0; t < subsamples; ++t) {
      const double v = cy + w * ((t + 0.5) / subsamples - 0.5);
      acc += std::pow(u * u + v * v, -11.0 / 6.0);
    }
  }
  return acc / (static_cast<double>(subsamples) * subsamples);
}

int subsample_schedule(int ki, int kj) {
  const int d = std::max(std::abs(ki), std::abs(kj));
  if (d <= 3) return 16;
  if (d <= 8) return 4;
  if (d <= 20) return 2;
  return 1;
}

struct DirectWave {
  double fx = 0.0;  // frequency in units of 1/window
  double fy = 0.0;
  std::complex<double> coefficient;
};

}  // namespace

double fried_from_strength(ScintillationStrength s, double w0) {
  if (!(w0 > 0.0)) throw ValidationError("fried_from_strength: w0 must be positive");
  if (s.s < 0.0) throw ValidationError("fried_from_strength: negative scintillation strength");
  if (s.s == 0.0) return std::numeric_limits<double>::infinity();
  return w0 / s.s;
}

bool is_flat_r0(double r0) { return std::isinf(r0); }

PhaseScreen kolmogorov_screen(const GridSpec& grid, double r0, std::uint64_t seed,
                              const ScreenOptions& options) {
  const int n = grid.n;
  if (is_flat_r0(r0)) return PhaseScreen{grid, Eigen::MatrixXd::Zero(n, n), r0, seed};
  if (!(r0 > 0.0)) throw ValidationError("kolmogorov_screen: r0 must be positive");

  GaussianStream rng(seed);
  const double delta_f = 1.0 / grid.side_length;
  // Per-cell power scale: 0.023 r0^(-5/3) integral_cell f^(-11/3) d2f
  //                     = scale * <unit-cell average>, cells delta_f wide.
  const double scale = kPsdConstant * std::pow(r0, -5.0 / 3.0) * std::pow(delta_f, -5.0 / 3.0);
  const bool corrected = options.subharmonic_octaves > 0;

  // FFT part. The lowest ring of bins (max norm 1) moves to the direct-wave
  // path when the low-frequency correction is on; with it off this is the
  // plain midpoint synthesis, kept as a debug reference that visibly fails
  // the structure-function check.
  Eigen::MatrixXcd spectrum(n, n);
  for (int j = 0; j < n; ++j) {
    const int kj = j < n / 2 ? j : j - n;
    for (int i = 0; i < n; ++i) {
      const int ki = i < n / 2 ? i : i - n;
      const double re = rng.normal();
      const double im = rng.normal();
      const int ring = std::max(std::abs(ki), std::abs(kj));
      if (ring == 0 || (corrected && ring <= 1)) {
        spectrum(i, j) = 0.0;
        continue;
      }
      const double power =
          corrected
              ? scale * cell_average(ki, kj, 1.0, subsample_schedule(ki, kj))
              : scale * std::pow(static_cast<double>(ki) * ki + static_cast<double>(kj) * kj,
                                 -11.0 / 6.0);
      spectrum(i, j) = std::complex<double>(re, im) * std::sqrt(power);
    }
  }
  Fft2D fft(n);
  fft.backward(spectrum);
  Eigen::MatrixXd phase = spectrum.real();

  if (corrected) {
    std::vector<DirectWave> waves;
    waves.reserve(72 + 8 * static_cast<std::size_t>(options.subharmonic_octaves));

    // Ring-1 bins resampled on a 3x3 subcell grid: one plane wave per
    // subcell, each carrying the subcell's integrated power.
    for (int a = -1; a <= 1; ++a) {
      for (int b = -1; b <= 1; ++b) {
        if (a == 0 && b == 0) continue;
        for (int s = -1; s <= 1; ++s) {
          for (int t = -1; t <= 1; ++t) {
            const double re = rng.normal();
            const double im = rng.normal();
            const double fx = a + s / 3.0;
            const double fy = b + t / 3.0;
            const double power = scale * cell_average(fx, fy, 1.0 / 3.0, 32) / 9.0;
            waves.push_back({fx, fy, std::complex<double>(re, im) * std::sqrt(power)});
          }
        }
      }
    }

    // Subharmonic octaves fill the remaining spectral hole around DC; each
    // level tiles the center cell of the previous one.
    for (int p = 1; p <= options.subharmonic_octaves; ++p) {
      const double cell = std::pow(3.0, -p);
      const double octave_scale =
          kPsdConstant * std::pow(r0, -5.0 / 3.0) * std::pow(delta_f * cell, -5.0 / 3.0);
      for (int a = -1; a <= 1; ++a) {
        for (int b = -1; b <= 1; ++b) {
          const double re = rng.normal();
          const double im = rng.normal();
          if (a == 0 && b == 0) continue;
          const double power = octave_scale * cell_average(a, b, 1.0, 32);
          waves.push_back({a * cell, b * cell, std::complex<double>(re, im) * std::sqrt(power)});
        }
      }
    }

    // phase += Re( PX diag(c) PY^T ), one BLAS-3 product for all waves.
    const int m = static_cast<int>(waves.size());
    Eigen::MatrixXcd px(n, m), py(n, m);
    Eigen::VectorXcd coef(m);
    for (int w = 0; w < m; ++w) {
      const double ax = 2.0 * std::numbers::pi * waves[static_cast<std::size_t>(w)].fx / n;
      const double ay = 2.0 * std::numbers::pi * waves[static_cast<std::size_t>(w)].fy / n;
      for (int i = 0; i < n; ++i) {
        px(i, w) = std::polar(1.0, ax * i);
        py(i, w) = std::polar(1.0, ay * i);
      }
      coef(w) = waves[static_cast<std::size_t>(w)].coefficient;
    }
    phase.noalias() += ((px * coef.asDiagonal()) * py.transpose()).real();
  }

  phase.array() -= phase.mean();
  return PhaseScreen{grid, std::move(phase), r0, seed};
}

double kolmogorov_structure_function(double r, double r0) {
  if (is_flat_r0(r0)) return 0.0;
  return kSfConstant * std::pow(r / r0, 5.0 / 3.0);
}

std::vector<StructureFunctionPoint> structure_function(const std::vector<PhaseScreen>& screens,
                                                       const std::vector<double>& radii) {
  if (screens.size() < 100)
    throw ValidationError("structure_function: need >= 100 screens, got " +
                          std::to_string(screens.size()));
  const GridSpec grid = screens.front().grid;
  const double r0 = screens.front().r0;
  for (const PhaseScreen& s : screens)
    if (s.grid != grid || s.r0 != r0)
      throw ValidationError("structure_function: screens must share grid and r0");

  const double pitch = grid.pitch();
  const int n = grid.n;
  std::vector<StructureFunctionPoint> result;
  result.reserve(radii.size());
  for (double r : radii) {
    if (r < 4.0 * pitch - 1e-12 || r > grid.side_length / 4.0 + 1e-12)
      throw ValidationError("structure_function: radius " + std::to_string(r) +
                            " outside the resolvable band");
    const int k = static_cast<int>(std::lround(r / pitch));
    double acc = 0.0;
    double count = 0.0;
    for (const PhaseScreen& s : screens) {
      acc += (s.phase.bottomRows(n - k) - s.phase.topRows(n - k)).squaredNorm();
      acc += (s.phase.rightCols(n - k) - s.phase.leftCols(n - k)).squaredNorm();
      count += 2.0 * static_cast<double>(n - k) * n;
    }
    const double r_used = k * pitch;
    result.push_back({r_used, acc / count, kolmogorov_structure_function(r_used, r0)});
  }
  return result;
}

}  // namespace oamsim
