// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "oamsim/field.hpp"
#include "oamsim/grid.hpp"

namespace oamsim {

/// Azimuthal / radial mode index. Only p = 0 modes exist in this artifact.
struct ModeIndex {
  int ell = 0;
  int p = 0;
};

/// Synthesizes the p = 0 Laguerre-Gaussian mode
///   u(r, phi) ~ (sqrt(2) r / w0)^|ell| exp(-r^2 / w0^2) exp(i ell phi)
/// normalized to unit discrete norm on the given grid. The normalization is
/// computed numerically so that discrete orthonormality holds regardless of
/// grid choice. Throws ValidationError when the ring radius w0 sqrt(|ell|/2)
/// exceeds side_length / 4 (under-resolved mode) or w0 <= 0.
ComplexField lg_mode(const GridSpec& grid, ModeIndex mode, double w0);

/// All LG_{ell, p=0} modes for ell in [-l_max, l_max] on a shared grid,
/// flattened (column-major) into the columns of a single matrix. Column c
/// holds ell = c - l_max. Construction verifies discrete orthonormality of
/// the bank to `gram_tolerance` and throws InvariantError otherwise; this is
/// the abort-on-bad-grid guard for every downstream projection.
class ModeBank {
 public:
  ModeBank(const GridSpec& grid, double w0, int l_max, double gram_tolerance = 1e-3);

  const GridSpec& grid() const { return grid_; }
  double w0() const { return w0_; }
  int l_max() const { return l_max_; }
  int dim() const { return 2 * l_max_ + 1; }

  /// n^2 x dim matrix of flattened modes.
  const Eigen::MatrixXcd& matrix() const { return modes_; }

  /// The flattened mode for a given ell.
  Eigen::MatrixXcd::ConstColXpr column(int ell) const { return modes_.col(ell + l_max_); }

  /// Worst deviation of the Gram matrix from identity, measured at build time.
  double gram_error() const { return gram_error_; }

 private:
  GridSpec grid_;
  double w0_;
  int l_max_;
  Eigen::MatrixXcd modes_;
  double gram_error_;
};

}  // namespace oamsim
