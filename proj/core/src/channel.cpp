// SPDX-License-Identifier: Apache-2.0
#include "oamsim/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "oamsim/errors.hpp"
#include "oamsim/fft.hpp"
#include "oamsim/parallel.hpp"
#include "oamsim/rng.hpp"

namespace oamsim {

namespace {

// Captured column mass below this is "everything leaked", a pathological run.
constexpr double kMinCapturedMass = 1e-6;
// Tolerance for the truncated-projection Bessel bound sum |c|^2 <= 1.
constexpr double kCapturedMassSlack = 1e-6;

Eigen::ArrayXcd phase_factor(const PhaseScreen& screen) {
  const auto theta = Eigen::Map<const Eigen::ArrayXd>(screen.phase.data(), screen.grid.size());
  Eigen::ArrayXcd out(theta.size());
  out.real() = theta.cos();
  out.imag() = theta.sin();
  return out;
}

double captured_or_throw(double mass, const std::string& what, int ell) {
  if (mass < -kCapturedMassSlack || mass > 1.0 + kCapturedMassSlack)
    throw InvariantError("channel: captured mass " + std::to_string(mass) + " for " + what +
                         " " + std::to_string(ell) + " outside [0, 1]");
  if (mass < kMinCapturedMass)
    throw ValidationError("channel: all probability mass leaked for " + what + " " +
                          std::to_string(ell));
  return mass;
}

}  // namespace

std::string to_string(Sidedness s) { return s == Sidedness::Single ? "single" : "double"; }
std::string to_string(Direction d) { return d == Direction::Forward ? "forward" : "backward"; }
std::string to_string(Provenance p) { return p == Provenance::Simulated ? "simulated" : "ingested"; }

Sidedness sidedness_from_string(const std::string& s) {
  if (s == "single") return Sidedness::Single;
  if (s == "double") return Sidedness::Double;
  throw FormatError("unknown sidedness '" + s + "'");
}

Direction direction_from_string(const std::string& s) {
  if (s == "forward") return Direction::Forward;
  if (s == "backward") return Direction::Backward;
  throw FormatError("unknown direction '" + s + "'");
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "simulated") return Provenance::Simulated;
  if (s == "ingested") return Provenance::Ingested;
  throw FormatError("unknown provenance '" + s + "'");
}

TransitionMatrix TransitionMatrix::identity(int l_max) {
  const int d = 2 * l_max + 1;
  return TransitionMatrix{l_max, Direction::Forward, Provenance::Simulated,
                          Eigen::MatrixXd::Identity(d, d), std::vector<double>(d, 0.0)};
}

void validate_column_stochastic(const TransitionMatrix& t, double tol) {
  const int d = t.dim();
  if (t.p.rows() != d || t.p.cols() != d)
    throw InvariantError("TransitionMatrix: shape does not match l_max");
  if (static_cast<int>(t.leakage.size()) != d)
    throw InvariantError("TransitionMatrix: leakage size does not match dim");
  if ((t.p.array() < 0.0).any())
    throw InvariantError("TransitionMatrix: negative entry");
  for (int c = 0; c < d; ++c) {
    const double sum = t.p.col(c).sum();
    if (std::abs(sum - 1.0) > tol)
      throw InvariantError("TransitionMatrix: column " + std::to_string(c - t.l_max) +
                           " sums to " + std::to_string(sum));
    if (t.leakage[c] < 0.0 || t.leakage[c] >= 1.0)
      throw InvariantError("TransitionMatrix: leakage out of [0, 1)");
  }
}

void ChannelConfig::validate() const {
  if (l_max < 1) throw ValidationError("channel: l_max must be >= 1");
  if (n_masks < 1) throw ValidationError("channel: n_masks must be >= 1");
  if (strength < 0.0) throw ValidationError("channel: negative scintillation strength");
  if (separation_z < 0.0) throw ValidationError("channel: negative separation_z");
  if (!(w0 > 0.0)) throw ValidationError("channel: w0 must be positive");
  if (spiral_weights) {
    const int d = 2 * l_max + 1;
    if (static_cast<int>(spiral_weights->size()) != d)
      throw ValidationError("channel: spiral_weights must have 2*l_max+1 entries");
    for (int i = 0; i < d; ++i) {
      const double w = (*spiral_weights)[i];
      if (!(w >= 0.0) || !std::isfinite(w))
        throw ValidationError("channel: spiral_weights must be finite and nonnegative");
      if (std::abs(w - (*spiral_weights)[d - 1 - i]) > 1e-12 * std::max(1.0, std::abs(w)))
        throw ValidationError("channel: spiral_weights must satisfy C_{-l} = C_l");
    }
  }
}

std::vector<double> ChannelConfig::input_weights() const {
  const int d = 2 * l_max + 1;
  std::vector<double> w(d, 1.0);
  if (spiral_weights) w = *spiral_weights;
  double sum = 0.0;
  for (double v : w) sum += v;
  if (!(sum > 0.0)) throw ValidationError("channel: spiral_weights sum to zero");
  for (double& v : w) v /= sum;
  return w;
}

ComplexField apply_screen(const ComplexField& field, const PhaseScreen& screen) {
  if (field.grid != screen.grid) throw ValidationError("apply_screen: grid mismatch");
  ComplexField out{field.grid, Eigen::MatrixXcd(field.grid.n, field.grid.n)};
  const auto factor = phase_factor(screen);
  Eigen::Map<Eigen::ArrayXcd>(out.values.data(), field.grid.size()) =
      Eigen::Map<const Eigen::ArrayXcd>(field.values.data(), field.grid.size()) * factor;
  return out;
}

ComplexField fresnel_propagate(const ComplexField& field, double z, bool conjugate) {
  if (z < 0.0) throw ValidationError("fresnel_propagate: z must be >= 0");
  if (z == 0.0) return field;

  const int n = field.grid.n;
  const double window = field.grid.side_length;
  // Quadratic spectral phase zeta k^2 / 4 must stay Nyquist-sampled:
  // zeta <= window^2 / (pi n).
  const double z_max = window * window / (std::numbers::pi * n);
  if (z > z_max)
    throw ValidationError("fresnel_propagate: z = " + std::to_string(z) +
                          " violates the aliasing guard (max " + std::to_string(z_max) + ")");

  Eigen::MatrixXcd work = field.values;
  Fft2D fft(n);
  fft.forward(work);
  const double dk = 2.0 * std::numbers::pi / window;
  const double sign = conjugate ? 1.0 : -1.0;
  for (int j = 0; j < n; ++j) {
    const int kj = j < n / 2 ? j : j - n;
    const double ky = kj * dk;
    for (int i = 0; i < n; ++i) {
      const int ki = i < n / 2 ? i : i - n;
      const double kx = ki * dk;
      work(i, j) *= std::polar(1.0, sign * z * (kx * kx + ky * ky) / 4.0);
    }
  }
  fft.backward(work);
  work /= static_cast<double>(field.grid.size());
  return ComplexField{field.grid, std::move(work)};
}

MaskRealization make_mask(const ChannelConfig& config, int mask_index) {
  const double r0 = fried_from_strength({config.strength}, config.w0);
  const auto seed_for = [&](std::uint64_t side_tag) {
    return derive_seed(config.master_seed,
                       {static_cast<std::uint64_t>(config.strength_index),
                        static_cast<std::uint64_t>(mask_index), side_tag});
  };
  MaskRealization mask;
  mask.first = kolmogorov_screen(config.grid, r0, seed_for(0));
  if (config.sidedness == Sidedness::Double) {
    mask.second = kolmogorov_screen(config.grid, r0, seed_for(1));
    mask.separation_z = config.separation_z;
  }
  return mask;
}

Eigen::MatrixXcd mask_amplitude_matrix(const ModeBank& bank, const MaskRealization& mask) {
  const GridSpec& grid = bank.grid();
  if (mask.first.grid != grid) throw ValidationError("mask_amplitude_matrix: grid mismatch");
  const double dx2 = grid.pitch() * grid.pitch();

  Eigen::MatrixXcd transformed;
  if (!mask.second || mask.separation_z == 0.0) {
    // Thin stack of phase-only elements collapses to one pointwise factor.
    Eigen::ArrayXcd factor = phase_factor(mask.first);
    if (mask.second) factor *= phase_factor(*mask.second);
    transformed = factor.matrix().asDiagonal() * bank.matrix();
  } else {
    if (mask.second->grid != grid)
      throw ValidationError("mask_amplitude_matrix: grid mismatch on second screen");
    const Eigen::ArrayXcd f1 = phase_factor(mask.first);
    const Eigen::ArrayXcd f2 = phase_factor(*mask.second);
    transformed.resize(grid.size(), bank.dim());
    for (int c = 0; c < bank.dim(); ++c) {
      ComplexField field{grid, Eigen::MatrixXcd(grid.n, grid.n)};
      Eigen::Map<Eigen::ArrayXcd>(field.values.data(), grid.size()) =
          bank.matrix().col(c).array() * f1;
      field = fresnel_propagate(field, mask.separation_z);
      transformed.col(c) =
          (Eigen::Map<const Eigen::ArrayXcd>(field.values.data(), grid.size()) * f2).matrix();
    }
  }
  return dx2 * (bank.matrix().adjoint() * transformed);
}

std::vector<std::complex<double>> single_mask_amplitudes(const ModeBank& bank, int input_ell,
                                                         const MaskRealization& mask) {
  if (std::abs(input_ell) > bank.l_max())
    throw ValidationError("single_mask_amplitudes: input ell outside truncation");
  const GridSpec& grid = bank.grid();
  const double dx2 = grid.pitch() * grid.pitch();

  ComplexField field{grid, Eigen::MatrixXcd(grid.n, grid.n)};
  Eigen::Map<Eigen::VectorXcd>(field.values.data(), grid.size()) = bank.column(input_ell);
  field = apply_screen(field, mask.first);
  if (mask.second) {
    if (mask.separation_z != 0.0) field = fresnel_propagate(field, mask.separation_z);
    field = apply_screen(field, *mask.second);
  }
  const Eigen::VectorXcd amps =
      dx2 * (bank.matrix().adjoint() *
             Eigen::Map<const Eigen::VectorXcd>(field.values.data(), grid.size()));
  return std::vector<std::complex<double>>(amps.data(), amps.data() + amps.size());
}

namespace {

TransitionMatrix finalize_forward(const Eigen::MatrixXd& raw, int l_max, Provenance prov) {
  const int d = 2 * l_max + 1;
  TransitionMatrix t{l_max, Direction::Forward, prov, Eigen::MatrixXd(d, d),
                     std::vector<double>(d, 0.0)};
  for (int c = 0; c < d; ++c) {
    const double mass = captured_or_throw(raw.col(c).sum(), "input", c - l_max);
    t.p.col(c) = raw.col(c) / mass;
    t.leakage[c] = std::max(0.0, 1.0 - mass);
  }
  return t;
}

TransitionMatrix finalize_backward(const Eigen::MatrixXd& raw, const std::vector<double>& weights,
                                   int l_max, Provenance prov) {
  const int d = 2 * l_max + 1;
  TransitionMatrix t{l_max, Direction::Backward, prov, Eigen::MatrixXd(d, d),
                     std::vector<double>(d, 0.0)};
  for (int r = 0; r < d; ++r) {
    captured_or_throw(raw.row(r).sum(), "output", r - l_max);
    double denom = 0.0;
    for (int c = 0; c < d; ++c) denom += weights[c] * raw(r, c);
    if (!(denom > 0.0))
      throw ValidationError("channel: no weighted mass reaching output " +
                            std::to_string(r - l_max));
    for (int c = 0; c < d; ++c) t.p(c, r) = weights[c] * raw(r, c) / denom;
    t.leakage[r] = std::max(0.0, 1.0 - raw.row(r).sum());
  }
  return t;
}

}  // namespace

ChannelEstimate estimate_channel_from_masks(const ModeBank& bank,
                                            const std::vector<MaskRealization>& masks,
                                            const ChannelConfig& config, int workers) {
  config.validate();
  if (bank.l_max() != config.l_max || bank.grid() != config.grid)
    throw ValidationError("estimate_channel: mode bank does not match config");
  if (masks.empty()) throw ValidationError("estimate_channel: no masks");

  const int d = bank.dim();
  std::vector<Eigen::MatrixXd> per_mask(masks.size());
  parallel_for(
      masks.size(),
      [&](std::size_t m) { per_mask[m] = mask_amplitude_matrix(bank, masks[m]).cwiseAbs2(); },
      workers);

  // Fixed-order reduction keyed by mask index keeps results worker-count
  // invariant.
  Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(d, d);
  for (const Eigen::MatrixXd& table : per_mask) raw += table;
  raw /= static_cast<double>(masks.size());

  ChannelEstimate est;
  est.raw = raw;
  est.forward = finalize_forward(raw, config.l_max, Provenance::Simulated);
  est.backward = finalize_backward(raw, config.input_weights(), config.l_max,
                                   Provenance::Simulated);
  return est;
}

ChannelEstimate estimate_channel(const ModeBank& bank, const ChannelConfig& config, int workers) {
  config.validate();
  std::vector<MaskRealization> masks;
  masks.reserve(config.n_masks);
  for (int m = 0; m < config.n_masks; ++m) masks.push_back(make_mask(config, m));
  return estimate_channel_from_masks(bank, masks, config, workers);
}

ChannelEstimate estimate_channel(const ChannelConfig& config, int workers) {
  config.validate();
  ModeBank bank(config.grid, config.w0, config.l_max);
  return estimate_channel(bank, config, workers);
}

TransitionMatrix estimate_transition(const ChannelConfig& config, int workers) {
  return estimate_channel(config, workers).forward;
}

TransitionMatrix forward_from_counts(const CountsMatrix& counts) {
  const int d = counts.dim();
  if (counts.counts.rows() != d || counts.counts.cols() != d)
    throw ValidationError("forward_from_counts: counts shape does not match l_max");
  if ((counts.counts.array() < 0).any())
    throw ValidationError("forward_from_counts: negative counts");
  TransitionMatrix t{counts.l_max, Direction::Forward, Provenance::Ingested,
                     Eigen::MatrixXd(d, d), std::vector<double>(d, 0.0)};
  for (int i = 0; i < d; ++i) {
    const double total = static_cast<double>(counts.counts.row(i).sum());
    if (total <= 0.0)
      throw ValidationError("forward_from_counts: no counts for input l = " +
                            std::to_string(i - counts.l_max));
    for (int j = 0; j < d; ++j)
      t.p(j, i) = static_cast<double>(counts.counts(i, j)) / total;
  }
  return t;
}

TransitionMatrix backward_from_counts(const CountsMatrix& counts) {
  const int d = counts.dim();
  if (counts.counts.rows() != d || counts.counts.cols() != d)
    throw ValidationError("backward_from_counts: counts shape does not match l_max");
  if ((counts.counts.array() < 0).any())
    throw ValidationError("backward_from_counts: negative counts");
  TransitionMatrix t{counts.l_max, Direction::Backward, Provenance::Ingested,
                     Eigen::MatrixXd(d, d), std::vector<double>(d, 0.0)};
  for (int j = 0; j < d; ++j) {
    const double total = static_cast<double>(counts.counts.col(j).sum());
    if (total <= 0.0)
      throw ValidationError("backward_from_counts: no counts for output l = " +
                            std::to_string(j - counts.l_max));
    for (int i = 0; i < d; ++i)
      t.p(i, j) = static_cast<double>(counts.counts(i, j)) / total;
  }
  return t;
}

}  // namespace oamsim
