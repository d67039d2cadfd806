// SPDX-License-Identifier: Apache-2.0
#include "oamsim/field.hpp"

#include <cmath>

#include "oamsim/errors.hpp"

namespace oamsim {

std::complex<double> overlap(const ComplexField& a, const ComplexField& b) {
  if (a.grid != b.grid) throw ValidationError("overlap: fields live on different grids");
  const double dx2 = a.grid.pitch() * a.grid.pitch();
  std::complex<double> acc = (a.values.conjugate().array() * b.values.array()).sum();
  return acc * dx2;
}

double field_norm(const ComplexField& f) {
  const double dx2 = f.grid.pitch() * f.grid.pitch();
  return std::sqrt(f.values.squaredNorm() * dx2);
}

}  // namespace oamsim
