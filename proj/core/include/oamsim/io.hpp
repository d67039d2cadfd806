// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "oamsim/channel.hpp"
#include "oamsim/config.hpp"
#include "oamsim/stats.hpp"
#include "oamsim/thermo.hpp"

namespace oamsim {

/// Hex-encoded SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double value);

/// Counts CSV: '#key=value' metadata lines, a header row 'l_in,-L,...,L',
/// then one row per prepared input with integer counts over outputs.
/// (The pair source is anti-correlated, so l_in = -l_signal; the row labels
/// already carry the prepared-input convention.)
void write_counts_csv(const CountsMatrix& counts, const std::filesystem::path& path);

/// Parses a counts CSV; malformed input raises FormatError with the line
/// number.
CountsMatrix read_counts_csv(const std::filesystem::path& path);

/// Simulated-channel annotations carried in transition files.
struct TransitionMeta {
  double strength = 0.0;
  int strength_index = 0;
  Sidedness sidedness = Sidedness::Single;
  int n_masks = 0;
  double separation_z = 0.0;
  std::uint64_t master_seed = 0;
  int grid_n = 0;
  double side_length = 0.0;
  double w0 = 0.0;
};

void write_transition_json(const TransitionMatrix& t, const std::filesystem::path& path,
                           const std::optional<TransitionMeta>& meta = std::nullopt);
TransitionMatrix read_transition_json(const std::filesystem::path& path);

/// Per-beta report CSV with the pinned column set; confidence-band columns
/// '<quantity>_lo', '<quantity>_hi' are appended when a band is given.
void write_thermo_csv(const std::vector<ThermoReport>& reports, const std::filesystem::path& path,
                      const ConfidenceBand* band = nullptr);

struct ManifestEntry {
  std::string file;  ///< relative to the manifest's directory
  std::string sha256;
  int strength_index = 0;
  double strength = 0.0;
  Sidedness sidedness = Sidedness::Single;
  Direction direction = Direction::Forward;
};

/// Sweep manifest: the config, the fully expanded strength and beta grids
/// (endpoints inclusive, serialized to remove ambiguity) and one hashed entry
/// per emitted file.
struct Manifest {
  RunConfig config;
  std::vector<double> strengths;
  std::vector<double> betas;
  std::vector<ManifestEntry> entries;
};

void write_manifest(const Manifest& manifest, const std::filesystem::path& path);
Manifest read_manifest(const std::filesystem::path& path);

/// Throws ValidationError unless `file` (a path to an input) is listed in the
/// manifest and its current hash matches the recorded one.
void verify_against_manifest(const Manifest& manifest, const std::filesystem::path& file);

}  // namespace oamsim
