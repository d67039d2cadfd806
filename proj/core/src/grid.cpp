// SPDX-License-Identifier: Apache-2.0
#include "oamsim/grid.hpp"

#include <string>

#include "oamsim/errors.hpp"

namespace oamsim {

GridSpec make_grid(int n, double side_length) {
  if (n < 64) throw ValidationError("grid: n must be >= 64, got " + std::to_string(n));
  if (n % 2 != 0) throw ValidationError("grid: n must be even, got " + std::to_string(n));
  if (!(side_length > 0.0))
    throw ValidationError("grid: side_length must be positive, got " + std::to_string(side_length));
  return GridSpec{n, side_length};
}

GridSpec default_grid() { return make_grid(256, 12.0); }

}  // namespace oamsim
