// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "oamsim/channel.hpp"
#include "oamsim/errors.hpp"
#include "oamsim/field.hpp"
#include "oamsim/rng.hpp"

using namespace oamsim;

namespace {

PhaseScreen constant_screen(const GridSpec& grid, double value) {
  return PhaseScreen{grid, Eigen::MatrixXd::Constant(grid.n, grid.n, value),
                     std::numeric_limits<double>::infinity(), 0};
}

PhaseScreen vortex_screen(const GridSpec& grid, int m) {
  PhaseScreen s{grid, Eigen::MatrixXd(grid.n, grid.n), 1.0, 0};
  for (int j = 0; j < grid.n; ++j)
    for (int i = 0; i < grid.n; ++i)
      s.phase(i, j) = m * std::atan2(grid.coord(j), grid.coord(i));
  return s;
}

PhaseScreen random_screen(const GridSpec& grid, std::uint64_t seed, double scale) {
  GaussianStream rng(seed);
  PhaseScreen s{grid, Eigen::MatrixXd(grid.n, grid.n), 1.0, seed};
  for (int j = 0; j < grid.n; ++j)
    for (int i = 0; i < grid.n; ++i) s.phase(i, j) = scale * rng.normal();
  return s;
}

// Test-only generalized LG mode with radial index p, for the radial-leakage
// oracle. Normalized numerically like the production p = 0 modes.
ComplexField lg_mode_radial(const GridSpec& grid, int ell, int p, double w0) {
  const int abs_ell = std::abs(ell);
  auto laguerre = [&](double x) {
    double lk_minus = 1.0;                      // L_0
    double lk = 1.0 + abs_ell - x;              // L_1
    if (p == 0) return lk_minus;
    for (int k = 1; k < p; ++k) {
      const double next = ((2.0 * k + 1.0 + abs_ell - x) * lk - (k + abs_ell) * lk_minus) /
                          (k + 1.0);
      lk_minus = lk;
      lk = next;
    }
    return lk;
  };
  ComplexField f{grid, Eigen::MatrixXcd(grid.n, grid.n)};
  for (int j = 0; j < grid.n; ++j) {
    const double y = grid.coord(j);
    for (int i = 0; i < grid.n; ++i) {
      const double x = grid.coord(i);
      const double r2 = x * x + y * y;
      const double radial = std::pow(std::sqrt(2.0 * r2) / w0, abs_ell) *
                            laguerre(2.0 * r2 / (w0 * w0)) * std::exp(-r2 / (w0 * w0));
      f.values(i, j) = std::polar(radial, ell * std::atan2(y, x));
    }
  }
  f.values /= field_norm(f);
  return f;
}

ChannelConfig small_config(double strength, Sidedness side = Sidedness::Single) {
  ChannelConfig config;
  config.grid = make_grid(128, 12.0);
  config.l_max = 5;
  config.strength = strength;
  config.n_masks = 8;
  config.sidedness = side;
  config.master_seed = 77;
  return config;
}

double diagonal_mean(const TransitionMatrix& t) { return t.p.diagonal().mean(); }

}  // namespace

TEST_CASE("apply_screen: identity, global phase, unitarity") {
  const GridSpec g = make_grid(128, 10.0);
  const ComplexField f = lg_mode(g, {2, 0}, 1.0);

  const ComplexField same = apply_screen(f, constant_screen(g, 0.0));
  CHECK((same.values - f.values).cwiseAbs().maxCoeff() == 0.0);

  const ComplexField rotated = apply_screen(f, constant_screen(g, 1.234));
  CHECK(std::abs(std::abs(overlap(f, rotated)) - 1.0) < 1e-12);

  const ComplexField scrambled = apply_screen(f, random_screen(g, 5, 2.0));
  CHECK(std::abs(field_norm(scrambled) - field_norm(f)) < 1e-12);

  const GridSpec other = make_grid(64, 10.0);
  CHECK_THROWS_AS(apply_screen(f, constant_screen(other, 0.0)), ValidationError);
}

TEST_CASE("fresnel_propagate: identity at z = 0, norm preservation, invertibility") {
  const GridSpec g = make_grid(128, 12.0);
  const ComplexField f = lg_mode(g, {2, 0}, 1.0);

  const ComplexField still = fresnel_propagate(f, 0.0);
  CHECK((still.values - f.values).cwiseAbs().maxCoeff() == 0.0);

  const double z = 0.1;
  const ComplexField moved = fresnel_propagate(f, z);
  CHECK(std::abs(field_norm(moved) - 1.0) < 1e-10);

  const ComplexField back = fresnel_propagate(moved, z, /*conjugate=*/true);
  CHECK((back.values - f.values).cwiseAbs().maxCoeff() < 1e-8);

  CHECK_THROWS_AS(fresnel_propagate(f, -0.5), ValidationError);
  CHECK_THROWS_AS(fresnel_propagate(f, 1e6), ValidationError);  // aliasing guard
}

TEST_CASE("fresnel_propagate keeps the fundamental mode azimuthally symmetric") {
  const GridSpec g = make_grid(128, 12.0);
  const ComplexField f = lg_mode(g, {0, 0}, 1.0);
  const ComplexField moved = fresnel_propagate(f, 0.2);
  CHECK(std::abs(field_norm(moved) - 1.0) < 1e-10);
  // Intensity at mirrored sample quadruples must agree.
  const int n = g.n;
  double worst = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double a = std::norm(moved.values(i, j));
      const double b = std::norm(moved.values(n - 1 - i, j));
      const double c = std::norm(moved.values(i, n - 1 - j));
      worst = std::max({worst, std::abs(a - b), std::abs(a - c)});
    }
  CHECK(worst < 1e-12);
}

TEST_CASE("single_mask_amplitudes: flat screens give the identity channel") {
  const ChannelConfig config = small_config(0.0);
  const ModeBank bank(config.grid, config.w0, config.l_max);
  const MaskRealization mask = make_mask(config, 0);
  for (int ell : {-3, 0, 4}) {
    const auto amps = single_mask_amplitudes(bank, ell, mask);
    for (int out = -config.l_max; out <= config.l_max; ++out) {
      const double expected = out == ell ? 1.0 : 0.0;
      CHECK(std::abs(std::abs(amps[static_cast<std::size_t>(out + config.l_max)]) - expected) <
            1e-3);
    }
  }
}

TEST_CASE("vortex screen shifts the azimuthal index; leakage is radial only") {
  // Selection rule: exp(i m phi) couples l only to l + m. The missing weight
  // at l + m sits in p > 0 modes; brute-force projections over p = 0..5
  // recover it.
  const GridSpec g = make_grid(256, 12.0);
  const int l_max = 5;
  const ModeBank bank(g, 1.0, l_max);
  const int input = 1, m = 2;
  const MaskRealization mask{vortex_screen(g, m), std::nullopt, 0.0};

  const auto amps = single_mask_amplitudes(bank, input, mask);
  double captured = 0.0;
  for (int out = -l_max; out <= l_max; ++out) {
    const double a2 = std::norm(amps[static_cast<std::size_t>(out + l_max)]);
    if (out == input + m) continue;
    CHECK(a2 < 1e-6);  // azimuthal orthogonality kills every other output
    captured += a2;
  }
  const double peak = std::norm(amps[static_cast<std::size_t>(input + m + l_max)]);

  // Oracle: the shifted field decomposes over LG_{l+m, p}; its p = 0 share is
  // the peak above, and the first few p > 0 shares account for the rest.
  const ComplexField shifted = apply_screen(
      ComplexField{g, Eigen::Map<const Eigen::MatrixXcd>(bank.column(input).data(), g.n, g.n)},
      mask.first);
  double radial_sum_5 = 0.0;
  double radial_sum_40 = 0.0;
  for (int p = 0; p <= 40; ++p) {
    const ComplexField probe = lg_mode_radial(g, input + m, p, 1.0);
    const double share = std::norm(overlap(probe, shifted));
    if (p <= 5) radial_sum_5 += share;
    radial_sum_40 += share;
  }
  CHECK(std::norm(overlap(lg_mode_radial(g, input + m, 0, 1.0), shifted)) ==
        doctest::Approx(peak).epsilon(1e-10));
  // Closed form for this configuration: |<LG_{3,0}| e^{i2phi} |LG_{1,0}>|^2
  // = (int r^5 e^{-2r^2})^2 / (int r^3 e^{-2r^2} int r^7 e^{-2r^2}) = 2/3.
  CHECK(peak == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
  CHECK(radial_sum_5 > 0.95);    // the first radial orders carry the bulk
  CHECK(radial_sum_40 > 0.998);  // the tower tail decays like 1/p^2
  CHECK(radial_sum_40 <= 1.0 + 1e-3);
}

TEST_CASE("any mask keeps the truncated projections inside the Bessel bound") {
  const ChannelConfig config = small_config(2.0);
  const ModeBank bank(config.grid, config.w0, config.l_max);
  for (int mask_index = 0; mask_index < 3; ++mask_index) {
    const MaskRealization mask = make_mask(config, mask_index);
    for (int ell = -config.l_max; ell <= config.l_max; ++ell) {
      const auto amps = single_mask_amplitudes(bank, ell, mask);
      double sum = 0.0;
      for (const auto& a : amps) sum += std::norm(a);
      CHECK(sum <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("estimate_transition: no turbulence is the identity channel") {
  const TransitionMatrix t = estimate_transition(small_config(0.0));
  validate_column_stochastic(t);
  CHECK((t.p - Eigen::MatrixXd::Identity(t.dim(), t.dim())).cwiseAbs().maxCoeff() < 1e-3);
  for (double leak : t.leakage) CHECK(leak <= 1e-3);
}

TEST_CASE("estimate_transition: crosstalk grows with scintillation strength") {
  const double d0 = diagonal_mean(estimate_transition(small_config(0.0)));
  const double d2 = diagonal_mean(estimate_transition(small_config(2.0)));
  const double d4 = diagonal_mean(estimate_transition(small_config(4.0)));
  CHECK(d2 < d0);
  CHECK(d4 < d2);
}

TEST_CASE("estimate_transition: one mask equals that mask's normalized projections") {
  ChannelConfig config = small_config(1.5);
  config.n_masks = 1;
  const ModeBank bank(config.grid, config.w0, config.l_max);
  const TransitionMatrix t = estimate_channel(bank, config).forward;
  const MaskRealization mask = make_mask(config, 0);
  for (int ell = -config.l_max; ell <= config.l_max; ++ell) {
    const auto amps = single_mask_amplitudes(bank, ell, mask);
    double sum = 0.0;
    for (const auto& a : amps) sum += std::norm(a);
    for (int out = -config.l_max; out <= config.l_max; ++out) {
      const double expected = std::norm(amps[static_cast<std::size_t>(out + config.l_max)]) / sum;
      CHECK(t.at(out, ell) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("estimates are deterministic and worker-count invariant") {
  const ChannelConfig config = small_config(2.0);
  const ModeBank bank(config.grid, config.w0, config.l_max);
  const ChannelEstimate serial = estimate_channel(bank, config, 1);
  const ChannelEstimate threaded = estimate_channel(bank, config, 4);
  CHECK((serial.raw.array() == threaded.raw.array()).all());
  CHECK((serial.forward.p.array() == threaded.forward.p.array()).all());
  CHECK((serial.backward.p.array() == threaded.backward.p.array()).all());
}

TEST_CASE("relabeling l -> -l with mirrored screens mirrors the estimate") {
  const ChannelConfig config = small_config(2.5);
  const ModeBank bank(config.grid, config.w0, config.l_max);
  std::vector<MaskRealization> masks, mirrored;
  for (int m = 0; m < config.n_masks; ++m) {
    MaskRealization mask = make_mask(config, m);
    MaskRealization flipped = mask;
    flipped.first.phase = mask.first.phase.rowwise().reverse().eval();
    masks.push_back(std::move(mask));
    mirrored.push_back(std::move(flipped));
  }
  const ChannelEstimate base = estimate_channel_from_masks(bank, masks, config);
  const ChannelEstimate flip = estimate_channel_from_masks(bank, mirrored, config);
  const Eigen::MatrixXd remapped = flip.raw.reverse();
  CHECK((remapped - base.raw).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("per-mask unitarity: phase screens preserve the field norm") {
  const ChannelConfig config = small_config(3.0);
  const ModeBank bank(config.grid, config.w0, config.l_max);
  const MaskRealization mask = make_mask(config, 2);
  ComplexField f{config.grid,
                 Eigen::Map<const Eigen::MatrixXcd>(bank.column(2).data(), config.grid.n,
                                                    config.grid.n)};
  const ComplexField through = apply_screen(f, mask.first);
  CHECK(std::abs(field_norm(through) - 1.0) < 1e-12);
}

TEST_CASE("double-sided channels scatter more than single-sided at equal strength") {
  const double single = diagonal_mean(estimate_transition(small_config(2.0)));
  const double dbl = diagonal_mean(estimate_transition(small_config(2.0, Sidedness::Double)));
  CHECK(dbl < single);
}

TEST_CASE("double-sided channel with free propagation between the screens") {
  ChannelConfig config = small_config(1.5, Sidedness::Double);
  config.separation_z = 0.05;
  const ModeBank bank(config.grid, config.w0, config.l_max);
  const ChannelEstimate est = estimate_channel(bank, config);
  validate_column_stochastic(est.forward);
  validate_column_stochastic(est.backward);
  for (int c = 0; c < est.raw.cols(); ++c) CHECK(est.raw.col(c).sum() <= 1.0 + 1e-9);

  // Same seeds, so z = 0 differs only by the propagation stretch.
  config.separation_z = 0.0;
  const ChannelEstimate flat = estimate_channel(bank, config);
  CHECK((est.raw - flat.raw).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("forward_from_counts: anti-diagonal coincidences are the identity channel") {
  // Rows are already labeled by the prepared input l_in = -l_signal, so
  // perfect anti-correlation in (l_A, l_B) lands on the table diagonal.
  CountsMatrix counts;
  counts.l_max = 2;
  counts.counts = Eigen::Matrix<std::int64_t, 5, 5>::Identity() * 480;
  const TransitionMatrix t = forward_from_counts(counts);
  validate_column_stochastic(t);
  CHECK((t.p - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(t.provenance == Provenance::Ingested);
  CHECK(t.direction == Direction::Forward);
}

TEST_CASE("forward_from_counts: uniform counts and plain normalization") {
  CountsMatrix counts;
  counts.l_max = 1;
  counts.counts.resize(3, 3);
  counts.counts.setConstant(7);
  const TransitionMatrix uniform = forward_from_counts(counts);
  CHECK((uniform.p.array() - 1.0 / 3.0).abs().maxCoeff() < 1e-15);

  counts.counts.row(1) << 10, 30, 60;
  const TransitionMatrix t = forward_from_counts(counts);
  CHECK(t.p(0, 1) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(t.p(1, 1) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(t.p(2, 1) == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("forward/backward/counts satisfy the joint-normalization identity") {
  // Brute force on a 3x3 integer table: p_f(out|in) * rowsum(in) = N(in,out)
  // and p_b(in|out) * colsum(out) = N(in,out).
  CountsMatrix counts;
  counts.l_max = 1;
  counts.counts.resize(3, 3);
  counts.counts << 12, 5, 3,
                   7, 20, 6,
                   2, 9, 31;
  const TransitionMatrix f = forward_from_counts(counts);
  const TransitionMatrix b = backward_from_counts(counts);
  validate_column_stochastic(f);
  validate_column_stochastic(b);
  for (int i = 0; i < 3; ++i) {
    const double rowsum = static_cast<double>(counts.counts.row(i).sum());
    for (int j = 0; j < 3; ++j) {
      const double colsum = static_cast<double>(counts.counts.col(j).sum());
      CHECK(f.p(j, i) * rowsum == doctest::Approx(double(counts.counts(i, j))).epsilon(1e-12));
      CHECK(b.p(i, j) * colsum == doctest::Approx(double(counts.counts(i, j))).epsilon(1e-12));
    }
  }
}

TEST_CASE("symmetric counts make forward and backward coincide") {
  CountsMatrix counts;
  counts.l_max = 1;
  counts.counts.resize(3, 3);
  counts.counts << 10, 4, 2,
                   4, 25, 5,
                   2, 5, 40;
  const TransitionMatrix f = forward_from_counts(counts);
  const TransitionMatrix b = backward_from_counts(counts);
  CHECK((f.p - b.p).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("dead rows and columns are rejected") {
  CountsMatrix counts;
  counts.l_max = 1;
  counts.counts.resize(3, 3);
  counts.counts << 1, 2, 0,
                   3, 4, 0,
                   5, 6, 0;  // output l = +1 never fires
  CHECK_NOTHROW(forward_from_counts(counts));
  CHECK_THROWS_AS(backward_from_counts(counts), ValidationError);

  counts.counts.setZero();
  CHECK_THROWS_AS(forward_from_counts(counts), ValidationError);
}

TEST_CASE("channel config validation") {
  ChannelConfig config = small_config(1.0);
  config.l_max = 0;
  CHECK_THROWS_AS(config.validate(), ValidationError);

  config = small_config(1.0);
  config.spiral_weights = std::vector<double>{1.0, 2.0, 3.0};  // wrong size for l_max = 5
  CHECK_THROWS_AS(config.validate(), ValidationError);

  config = small_config(1.0);
  config.spiral_weights = std::vector<double>(11, 1.0);
  (*config.spiral_weights)[0] = 2.0;  // breaks C_{-l} = C_l
  CHECK_THROWS_AS(config.validate(), ValidationError);

  config = small_config(-1.0);
  CHECK_THROWS_AS(config.validate(), ValidationError);
}
