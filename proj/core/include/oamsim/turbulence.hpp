// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "oamsim/grid.hpp"

namespace oamsim {

/// Dimensionless turbulence strength w0 / r0. Zero means no turbulence.
struct ScintillationStrength {
  double s = 0.0;
};

/// A single thin-turbulence realization: real phase in radians, applied
/// multiplicatively as exp(i theta). r0 is the Fried parameter in grid
/// length units; +infinity marks the flat (zero-phase) screen.
struct PhaseScreen {
  GridSpec grid;
  Eigen::MatrixXd phase;
  double r0 = 0.0;
  std::uint64_t seed = 0;
};

/// r0 = w0 / s. Strength zero maps to the flat-screen sentinel (+infinity);
/// negative strength is rejected.
double fried_from_strength(ScintillationStrength s, double w0);

/// True for the r0 sentinel that encodes "no turbulence".
bool is_flat_r0(double r0);

struct ScreenOptions {
  /// Low-frequency correction depth. Plain FFT synthesis misses scales larger
  /// than the window and fails the structure-function check; each subharmonic
  /// octave tiles the spectral hole below the previous one with a 3x3 sample.
  /// Zero disables the whole correction, falling back to plain midpoint
  /// synthesis (debug/validation use).
  int subharmonic_octaves = 3;
};

/// Draws a phase screen with Kolmogorov statistics: complex Gaussian spectral
/// amplitudes shaped by the phase power spectrum 0.023 r0^(-5/3) f^(-11/3),
/// inverse FFT, real part. Every spectral sample carries its cell-integrated
/// power, the lowest FFT ring is refined into 3x3 subcell waves, and
/// subharmonic octaves cover the region below the FFT resolution; together
/// these keep the ensemble structure function on the analytic law where the
/// plain recipe sags 15-30%. Zero-mean by construction and a pure function of
/// (grid, r0, seed).
PhaseScreen kolmogorov_screen(const GridSpec& grid, double r0, std::uint64_t seed,
                              const ScreenOptions& options = {});

/// Analytic Kolmogorov phase structure function D(r) = 6.88 (r / r0)^(5/3).
double kolmogorov_structure_function(double r, double r0);

struct StructureFunctionPoint {
  double r;         ///< separation actually used (snapped to whole pixels)
  double d_hat;     ///< ensemble-and-space average of (theta(x+r) - theta(x))^2
  double d_theory;  ///< analytic reference at the same separation
};

/// Estimates the phase structure function over an ensemble of screens that
/// share (grid, r0). Requires >= 100 screens and radii inside the resolvable
/// band [4 pitch, side_length / 4]; averages x- and y-oriented pairs.
std::vector<StructureFunctionPoint> structure_function(const std::vector<PhaseScreen>& screens,
                                                       const std::vector<double>& radii);

}  // namespace oamsim
