// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "oamsim/config.hpp"
#include "oamsim/io.hpp"
#include "oamsim/stats.hpp"
#include "oamsim/thermo.hpp"

namespace oamsim {

/// Per-beta thermodynamic reports for one channel.
std::vector<ThermoReport> thermo_curve(const TransitionMatrix& t,
                                       const std::vector<double>& betas);

/// counts -> transition (given direction) -> per-beta reports, as a reusable
/// pipeline for Monte-Carlo bands.
AnalysisPipeline make_counts_pipeline(Direction direction, std::vector<double> betas);

struct SimulateResult {
  std::filesystem::path manifest_path;
  Manifest manifest;
};

/// Runs the sweep: one transition-matrix file per (strength, sidedness,
/// direction), then the manifest (written last). Deterministic under
/// (config, master_seed) regardless of thread count.
SimulateResult run_simulate(const RunConfig& config, std::ostream* log = nullptr);

struct ScreenValidationResult {
  struct Row {
    double strength = 0.0;
    double r = 0.0;
    double d_hat = 0.0;
    double d_theory = 0.0;
  };
  std::vector<Row> rows;
  double worst_rel_error = 0.0;  ///< over nonzero strengths
  double tolerance = 0.15;
  bool pass = true;
};

/// Ensemble structure-function check at three representative sweep strengths.
ScreenValidationResult validate_screens(const RunConfig& config, int n_screens = 200,
                                        int subharmonic_octaves = 3, double tolerance = 0.15,
                                        std::ostream* log = nullptr);

/// CSV of (strength, r, d_hat, d_theory) rows.
void write_structure_function_csv(const ScreenValidationResult& result,
                                  const std::filesystem::path& path);

struct AnalyzeOptions {
  bool with_bands = false;
  std::optional<std::filesystem::path> manifest;
};

/// Analyzes transition-matrix JSON files and/or counts CSVs into per-beta
/// report CSVs under config.output_dir. Counts files produce one CSV per
/// configured direction. Returns the written paths.
std::vector<std::filesystem::path> run_analyze(const std::vector<std::filesystem::path>& inputs,
                                               const RunConfig& config,
                                               const AnalyzeOptions& options,
                                               std::ostream* log = nullptr);

/// Converts a counts CSV into a transition-matrix JSON file.
std::filesystem::path run_ingest(const std::filesystem::path& counts_csv, Direction direction,
                                 const RunConfig& config, std::ostream* log = nullptr);

}  // namespace oamsim
