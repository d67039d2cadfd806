// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace oamsim {

/// Square sampling grid for the transverse plane. Lengths are in units of the
/// beam waist w0, so the whole pipeline is dimensionless.
///
/// Sample (i, j) sits at ((i - n/2 + 0.5) * pitch, (j - n/2 + 0.5) * pitch):
/// the half-pixel offset keeps every sample away from the r = 0 phase
/// singularity of the vortex modes.
struct GridSpec {
  int n = 0;                 ///< samples per side, even, >= 64
  double side_length = 0.0;  ///< physical window width

  double pitch() const { return side_length / n; }
  double coord(int index) const { return (index - n / 2 + 0.5) * pitch(); }
  long size() const { return static_cast<long>(n) * n; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Validates and builds a GridSpec. Throws ValidationError on odd or
/// undersized n, or non-positive side length.
GridSpec make_grid(int n, double side_length);

/// The default working grid: 256 samples over a 12 w0 window.
GridSpec default_grid();

}  // namespace oamsim
