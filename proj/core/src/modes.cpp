// SPDX-License-Identifier: Apache-2.0
#include "oamsim/modes.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "oamsim/errors.hpp"

namespace oamsim {

ComplexField lg_mode(const GridSpec& grid, ModeIndex mode, double w0) {
  if (!(w0 > 0.0)) throw ValidationError("lg_mode: w0 must be positive");
  if (mode.p != 0) throw ValidationError("lg_mode: only p = 0 modes are supported");
  const int abs_ell = std::abs(mode.ell);
  const double ring_radius = w0 * std::sqrt(abs_ell / 2.0);
  if (ring_radius > grid.side_length / 4.0)
    throw ValidationError("lg_mode: ell = " + std::to_string(mode.ell) +
                          " is under-resolved on this grid (ring radius " +
                          std::to_string(ring_radius) + " > side_length/4)");

  const int n = grid.n;
  Eigen::MatrixXcd values(n, n);
  for (int j = 0; j < n; ++j) {
    const double y = grid.coord(j);
    for (int i = 0; i < n; ++i) {
      const double x = grid.coord(i);
      const double r2 = x * x + y * y;
      const double radial =
          std::pow(std::sqrt(2.0 * r2) / w0, abs_ell) * std::exp(-r2 / (w0 * w0));
      const double phase = mode.ell * std::atan2(y, x);
      values(i, j) = std::polar(radial, phase);
    }
  }

  ComplexField field{grid, std::move(values)};
  const double norm = field_norm(field);
  if (!(norm > 0.0)) throw InvariantError("lg_mode: mode has zero norm on this grid");
  field.values /= norm;
  return field;
}

ModeBank::ModeBank(const GridSpec& grid, double w0, int l_max, double gram_tolerance)
    : grid_(grid), w0_(w0), l_max_(l_max) {
  if (l_max < 1) throw ValidationError("ModeBank: l_max must be >= 1");
  const int d = 2 * l_max + 1;
  modes_.resize(grid.size(), d);
  for (int c = 0; c < d; ++c) {
    ComplexField mode = lg_mode(grid, ModeIndex{c - l_max, 0}, w0);
    modes_.col(c) = Eigen::Map<const Eigen::VectorXcd>(mode.values.data(), grid.size());
  }
  const double dx2 = grid.pitch() * grid.pitch();
  Eigen::MatrixXcd gram = dx2 * (modes_.adjoint() * modes_);
  gram.diagonal().array() -= 1.0;
  gram_error_ = gram.cwiseAbs().maxCoeff();
  if (gram_error_ > gram_tolerance)
    throw InvariantError("ModeBank: discrete orthonormality violated (max error " +
                         std::to_string(gram_error_) + " > " +
                         std::to_string(gram_tolerance) + "); refine the grid");
}

}  // namespace oamsim
