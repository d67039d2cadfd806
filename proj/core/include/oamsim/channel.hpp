// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oamsim/grid.hpp"
#include "oamsim/modes.hpp"
#include "oamsim/turbulence.hpp"

namespace oamsim {

enum class Sidedness { Single, Double };
enum class Direction { Forward, Backward };
enum class Provenance { Simulated, Ingested };

std::string to_string(Sidedness s);
std::string to_string(Direction d);
std::string to_string(Provenance p);
Sidedness sidedness_from_string(const std::string& s);
Direction direction_from_string(const std::string& s);
Provenance provenance_from_string(const std::string& s);

/// Conditional OAM transition probabilities over the truncated range.
/// p(row, col) = p(l_out | l_in) with indices offset by l_max, so every
/// column sums to one. leakage[col] is the probability mass that fell outside
/// the truncated p = 0 measurement set before renormalization.
struct TransitionMatrix {
  int l_max = 0;
  Direction direction = Direction::Forward;
  Provenance provenance = Provenance::Simulated;
  Eigen::MatrixXd p;
  std::vector<double> leakage;

  int dim() const { return 2 * l_max + 1; }
  int index(int ell) const { return ell + l_max; }
  double at(int l_out, int l_in) const { return p(index(l_out), index(l_in)); }

  static TransitionMatrix identity(int l_max);
};

/// Throws InvariantError unless all entries are nonnegative and every column
/// sums to 1 within tol.
void validate_column_stochastic(const TransitionMatrix& t, double tol = 1e-12);

/// Integer coincidence counts. Rows are prepared inputs l_in ascending,
/// columns measured outputs ascending. The anti-correlated pair source means
/// l_in = -l_signal; files record that convention in their metadata.
struct CountsMatrix {
  int l_max = 0;
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;
  double accumulation_s = 10.0;
  double gate_ns = 12.0;
  double pump_sigma = 0.05;

  int dim() const { return 2 * l_max + 1; }
};

/// Parameters of one simulated turbulence channel estimate.
struct ChannelConfig {
  GridSpec grid = default_grid();
  double w0 = 1.0;
  int l_max = 10;
  double strength = 0.0;  ///< scintillation strength w0 / r0
  int strength_index = 0; ///< position in the sweep; part of the seed recipe
  int n_masks = 30;
  Sidedness sidedness = Sidedness::Single;
  double separation_z = 0.0;  ///< double-sided screen separation, Rayleigh-range units
  std::optional<std::vector<double>> spiral_weights;  ///< per-ell source weights, flat if absent
  std::uint64_t master_seed = 1;

  void validate() const;
  /// Normalized source weights over l_in (flat unless spiral_weights is set).
  std::vector<double> input_weights() const;
};

/// One turbulence realization: a screen, plus a second screen and a free
/// propagation stretch for double-sided channels.
struct MaskRealization {
  PhaseScreen first;
  std::optional<PhaseScreen> second;
  double separation_z = 0.0;
};

/// Pointwise multiplication by exp(i theta); phase-only, hence unitary.
ComplexField apply_screen(const ComplexField& field, const PhaseScreen& screen);

/// Paraxial angular-spectrum propagation over distance z (Rayleigh-range
/// units). z = 0 is the identity. `conjugate` applies the conjugate transfer
/// function (the inverse propagation). Throws when the quadratic spectral
/// phase would be undersampled (aliasing guard).
ComplexField fresnel_propagate(const ComplexField& field, double z, bool conjugate = false);

/// Deterministically seeded screens for mask index m of a channel estimate.
/// Seeds derive from (master_seed, strength_index, mask_index, side_tag).
MaskRealization make_mask(const ChannelConfig& config, int mask_index);

/// Projection amplitudes c_out = <LG_out, U_mask LG_in> for every output in
/// the bank, input fixed. Index = l_out + l_max.
std::vector<std::complex<double>> single_mask_amplitudes(const ModeBank& bank, int input_ell,
                                                         const MaskRealization& mask);

/// Full d x d amplitude matrix (out, in) for one mask realization.
Eigen::MatrixXcd mask_amplitude_matrix(const ModeBank& bank, const MaskRealization& mask);

/// A channel estimate: the raw mask-averaged |c|^2 table plus its forward
/// (column-normalized) and backward (opposite-axis-normalized) conditional
/// matrices. Both directions read the same incoherently accumulated table;
/// the forward/backward asymmetry lives entirely in the normalization axis.
struct ChannelEstimate {
  Eigen::MatrixXd raw;  ///< (out, in), mask average of |c|^2, not normalized
  TransitionMatrix forward;
  TransitionMatrix backward;
};

ChannelEstimate estimate_channel(const ChannelConfig& config, int workers = 0);
/// Same, reusing a prebuilt mode bank (the bank's grid/l_max must match).
ChannelEstimate estimate_channel(const ModeBank& bank, const ChannelConfig& config,
                                 int workers = 0);
/// Same, from caller-supplied mask realizations (symmetry tests inject
/// mirrored screens here).
ChannelEstimate estimate_channel_from_masks(const ModeBank& bank,
                                            const std::vector<MaskRealization>& masks,
                                            const ChannelConfig& config, int workers = 0);

/// Forward conditional matrix of the estimate (the map the spec calls Phi).
TransitionMatrix estimate_transition(const ChannelConfig& config, int workers = 0);

/// Column-normalizes counts rows into conditional probabilities p(l_out|l_in).
TransitionMatrix forward_from_counts(const CountsMatrix& counts);

/// Normalizes along the opposite axis: column j of the result is the
/// distribution over l_in given measured output l_out = j - l_max.
TransitionMatrix backward_from_counts(const CountsMatrix& counts);

}  // namespace oamsim
