// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>

#include "oamsim/grid.hpp"

namespace oamsim {

/// Sampled 2D complex amplitude on a square grid. values(i, j) is the field
/// at (x_i, y_j); storage is column-major so flattening is x-fastest.
struct ComplexField {
  GridSpec grid;
  Eigen::MatrixXcd values;
};

/// Discrete Riemann-sum inner product <a, b> = sum conj(a) * b * pitch^2.
/// Conjugate-symmetric and linear in b. Throws ValidationError on grid mismatch.
std::complex<double> overlap(const ComplexField& a, const ComplexField& b);

/// L2 norm under the same discrete inner product.
double field_norm(const ComplexField& f);

}  // namespace oamsim
