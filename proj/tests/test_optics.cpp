// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "oamsim/errors.hpp"
#include "oamsim/field.hpp"
#include "oamsim/grid.hpp"
#include "oamsim/modes.hpp"

using namespace oamsim;

TEST_CASE("make_grid validates and derives the pixel pitch") {
  const GridSpec g = make_grid(256, 12.0);
  CHECK(g.pitch() == doctest::Approx(0.046875).epsilon(1e-15));
  CHECK(make_grid(64, 8.0).pitch() == doctest::Approx(0.125).epsilon(1e-15));

  CHECK_THROWS_AS(make_grid(63, 8.0), ValidationError);   // odd
  CHECK_THROWS_AS(make_grid(32, 8.0), ValidationError);   // undersized
  CHECK_THROWS_AS(make_grid(256, 0.0), ValidationError);  // empty window
  CHECK_THROWS_AS(make_grid(256, -1.0), ValidationError);
}

TEST_CASE("grid coordinates use the half-pixel offset, no sample at the origin") {
  const GridSpec g = make_grid(256, 12.0);
  CHECK(g.coord(128) == doctest::Approx(0.5 * g.pitch()).epsilon(1e-15));
  CHECK(g.coord(127) == doctest::Approx(-0.5 * g.pitch()).epsilon(1e-15));
  CHECK(g.coord(0) == doctest::Approx((-128 + 0.5) * g.pitch()).epsilon(1e-15));
  for (int i = 0; i < g.n; ++i) CHECK(std::abs(g.coord(i)) >= 0.49 * g.pitch());
}

TEST_CASE("lg_mode: fundamental mode peaks next to the origin") {
  const GridSpec g = make_grid(128, 10.0);
  const ComplexField f = lg_mode(g, {0, 0}, 1.0);
  CHECK(std::abs(field_norm(f) - 1.0) < 1e-12);

  double best = -1.0, best_r = 0.0;
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      const double intensity = std::norm(f.values(i, j));
      if (intensity > best) {
        best = intensity;
        best_r = std::hypot(g.coord(i), g.coord(j));
      }
    }
  CHECK(best_r < g.pitch());  // one of the four origin-adjacent samples
}

TEST_CASE("lg_mode: ring radius matches the analytic maximum of r^2|l| exp(-2r^2/w0^2)") {
  // d/dr [r^(2|l|) exp(-2 r^2 / w0^2)] = 0  =>  r_max = w0 sqrt(|l| / 2).
  const GridSpec g = make_grid(256, 12.0);
  const int ell = 4;
  const double expected = std::sqrt(ell / 2.0);  // = sqrt(2) for l = 4, w0 = 1
  const ComplexField f = lg_mode(g, {ell, 0}, 1.0);

  double best = -1.0, best_r = 0.0;
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      const double intensity = std::norm(f.values(i, j));
      if (intensity > best) {
        best = intensity;
        best_r = std::hypot(g.coord(i), g.coord(j));
      }
    }
  CHECK(std::abs(best_r - expected) <= g.pitch());
  CHECK(expected == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("lg_mode: phase winds by 2 pi l around a centered loop") {
  // Oracle: accumulate wrapped phase differences along a closed loop of
  // nearest-grid samples; the sum telescopes to 2 pi (winding number).
  const GridSpec g = make_grid(256, 12.0);
  const int ell = 3;
  const ComplexField f = lg_mode(g, {ell, 0}, 1.0);

  const double radius = 1.3;
  const int steps = 2000;
  double accumulated = 0.0;
  double previous = 0.0;
  for (int k = 0; k <= steps; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / steps;
    const int i = static_cast<int>(std::lround(radius * std::cos(angle) / g.pitch() - 0.5)) +
                  g.n / 2;
    const int j = static_cast<int>(std::lround(radius * std::sin(angle) / g.pitch() - 0.5)) +
                  g.n / 2;
    const double phase = std::arg(f.values(i, j));
    if (k > 0) {
      double d = phase - previous;
      while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
      while (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
      accumulated += d;
    }
    previous = phase;
  }
  CHECK(std::abs(accumulated - 2.0 * std::numbers::pi * ell) < 1e-3);
}

TEST_CASE("lg_mode rejects under-resolved modes and bad parameters") {
  const GridSpec g = make_grid(64, 4.0);  // side/4 = 1, ring radius of l=3 is 1.22
  CHECK_THROWS_AS(lg_mode(g, {3, 0}, 1.0), ValidationError);
  CHECK_NOTHROW(lg_mode(g, {1, 0}, 1.0));
  CHECK_THROWS_AS(lg_mode(g, {0, 0}, 0.0), ValidationError);
  CHECK_THROWS_AS(lg_mode(g, {0, 1}, 1.0), ValidationError);  // p > 0 unsupported
}

TEST_CASE("overlap: normalization, azimuthal orthogonality, conjugate symmetry") {
  const GridSpec g = make_grid(128, 10.0);
  const ComplexField a = lg_mode(g, {1, 0}, 1.0);
  const ComplexField b = lg_mode(g, {2, 0}, 1.0);

  CHECK(std::abs(overlap(a, a) - 1.0) < 1e-6);
  CHECK(std::abs(overlap(b, b) - 1.0) < 1e-6);
  CHECK(std::abs(overlap(a, b)) < 1e-6);

  const std::complex<double> ab = overlap(a, b);
  const std::complex<double> ba = overlap(b, a);
  CHECK(std::abs(ab - std::conj(ba)) < 1e-14);

  // identity screen: multiplying by exp(i*0) changes nothing
  ComplexField c = b;
  CHECK(std::abs(overlap(b, c) - 1.0) < 1e-6);

  const GridSpec other = make_grid(64, 10.0);
  CHECK_THROWS_AS(overlap(a, lg_mode(other, {1, 0}, 1.0)), ValidationError);
}

TEST_CASE("mode bank is orthonormal to 1e-3 over the full truncation") {
  const ModeBank bank(default_grid(), 1.0, 10);
  CHECK(bank.gram_error() <= 1e-3);
  CHECK(bank.dim() == 21);
}

TEST_CASE("parity: intensity of LG_{-l} equals intensity of LG_{+l} pointwise") {
  const GridSpec g = make_grid(128, 10.0);
  for (int ell : {1, 3, 5}) {
    const ComplexField plus = lg_mode(g, {ell, 0}, 1.0);
    const ComplexField minus = lg_mode(g, {-ell, 0}, 1.0);
    const double worst =
        (plus.values.cwiseAbs2() - minus.values.cwiseAbs2()).cwiseAbs().maxCoeff();
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("norm is invariant under multiplication by a pure phase") {
  const GridSpec g = make_grid(128, 10.0);
  ComplexField f = lg_mode(g, {2, 0}, 1.0);
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i)
      f.values(i, j) *= std::polar(1.0, 0.3 * i - 1.7 * j + 0.01 * i * j);
  CHECK(std::abs(field_norm(f) - 1.0) < 1e-12);
}
