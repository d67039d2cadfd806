// SPDX-License-Identifier: Apache-2.0
#include "oamsim/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <string>

#include "oamsim/errors.hpp"
#include "oamsim/parallel.hpp"
#include "oamsim/rng.hpp"
#include "oamsim/turbulence.hpp"

namespace oamsim {

namespace fs = std::filesystem;

std::vector<ThermoReport> thermo_curve(const TransitionMatrix& t,
                                       const std::vector<double>& betas) {
  std::vector<ThermoReport> reports;
  reports.reserve(betas.size());
  for (double beta : betas) reports.push_back(generalized_jarzynski_check(t, beta));
  return reports;
}

AnalysisPipeline make_counts_pipeline(Direction direction, std::vector<double> betas) {
  return [direction, betas = std::move(betas)](const CountsMatrix& counts) {
    const TransitionMatrix t = direction == Direction::Forward ? forward_from_counts(counts)
                                                               : backward_from_counts(counts);
    return thermo_curve(t, betas);
  };
}

namespace {

std::string sweep_file_name(int strength_index, Sidedness side, Direction dir) {
  char index[8];
  std::snprintf(index, sizeof(index), "%02d", strength_index);
  return "tmat_s" + std::string(index) + "_" + to_string(side) + "_" + to_string(dir) + ".json";
}

[[noreturn]] void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const ValidationError& e) {
    throw ValidationError(context + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(context + ": " + e.what());
  } catch (const InvariantError& e) {
    throw InvariantError(context + ": " + e.what());
  }
}

}  // namespace

SimulateResult run_simulate(const RunConfig& config, std::ostream* log) {
  config.validate();
  const fs::path out_dir(config.output_dir);
  fs::create_directories(out_dir);

  const GridSpec grid = config.grid();
  const ModeBank bank(grid, config.w0, config.l_max);

  Manifest manifest;
  manifest.config = config;
  manifest.strengths = config.strengths;
  manifest.betas = config.beta_values();

  for (std::size_t si = 0; si < config.strengths.size(); ++si) {
    const double strength = config.strengths[si];
    for (Sidedness side : config.sidedness) {
      ChannelConfig channel;
      channel.grid = grid;
      channel.w0 = config.w0;
      channel.l_max = config.l_max;
      channel.strength = strength;
      channel.strength_index = static_cast<int>(si);
      channel.n_masks = config.n_masks;
      channel.sidedness = side;
      channel.separation_z = side == Sidedness::Double ? config.separation_z : 0.0;
      channel.master_seed = config.master_seed;

      ChannelEstimate estimate;
      try {
        estimate = estimate_channel(bank, channel, config.threads);
      } catch (...) {
        rethrow_with_context("sweep point (strength " + format_double(strength) + ", " +
                             to_string(side) + ")");
      }

      TransitionMeta meta;
      meta.strength = strength;
      meta.strength_index = static_cast<int>(si);
      meta.sidedness = side;
      meta.n_masks = config.n_masks;
      meta.separation_z = channel.separation_z;
      meta.master_seed = config.master_seed;
      meta.grid_n = grid.n;
      meta.side_length = grid.side_length;
      meta.w0 = config.w0;

      for (Direction dir : config.directions) {
        const TransitionMatrix& t =
            dir == Direction::Forward ? estimate.forward : estimate.backward;
        const std::string name = sweep_file_name(static_cast<int>(si), side, dir);
        const fs::path file = out_dir / name;
        write_transition_json(t, file, meta);
        manifest.entries.push_back(ManifestEntry{name, sha256_file(file),
                                                 static_cast<int>(si), strength, side, dir});
        if (log)
          *log << "wrote " << file.string() << " (strength " << format_double(strength) << ", "
               << to_string(side) << ", " << to_string(dir) << ")\n";
      }
    }
  }

  const fs::path manifest_path = out_dir / "manifest.json";
  write_manifest(manifest, manifest_path);
  if (log) *log << "wrote " << manifest_path.string() << "\n";
  return SimulateResult{manifest_path, std::move(manifest)};
}

ScreenValidationResult validate_screens(const RunConfig& config, int n_screens,
                                        int subharmonic_octaves, double tolerance,
                                        std::ostream* log) {
  config.validate();
  if (n_screens < 100) throw ValidationError("validate_screens: need >= 100 screens");
  const GridSpec grid = config.grid();

  // Three representative sweep strengths: the endpoints and the middle.
  std::vector<double> picks;
  const std::vector<double>& sweep = config.strengths;
  picks.push_back(sweep.front());
  if (sweep.size() > 2) picks.push_back(sweep[sweep.size() / 2]);
  if (sweep.size() > 1) picks.push_back(sweep.back());

  const double pitch = grid.pitch();
  const double r_min = 4.0 * pitch;
  const double r_max = grid.side_length / 4.0;
  std::vector<double> radii;
  const int n_radii = 10;
  for (int i = 0; i < n_radii; ++i)
    radii.push_back(r_min + (r_max - r_min) * i / (n_radii - 1));

  ScreenValidationResult result;
  result.tolerance = tolerance;
  const ScreenOptions options{subharmonic_octaves};

  for (std::size_t k = 0; k < picks.size(); ++k) {
    const double strength = picks[k];
    const double r0 = fried_from_strength({strength}, config.w0);
    std::vector<PhaseScreen> screens(static_cast<std::size_t>(n_screens));
    parallel_for(
        screens.size(),
        [&](std::size_t i) {
          const std::uint64_t seed = derive_seed(
              config.master_seed, {0x5c3ee75ULL, static_cast<std::uint64_t>(k), i});
          screens[i] = kolmogorov_screen(grid, r0, seed, options);
        },
        config.threads);

    for (const StructureFunctionPoint& pt : structure_function(screens, radii)) {
      result.rows.push_back({strength, pt.r, pt.d_hat, pt.d_theory});
      if (strength > 0.0) {
        const double rel = std::abs(pt.d_hat - pt.d_theory) / pt.d_theory;
        result.worst_rel_error = std::max(result.worst_rel_error, rel);
        if (rel > tolerance) result.pass = false;
      } else if (pt.d_hat != 0.0) {
        result.pass = false;
      }
    }
    if (log)
      *log << "strength " << format_double(strength) << ": structure function sampled at "
           << radii.size() << " radii over " << n_screens << " screens\n";
  }
  return result;
}

void write_structure_function_csv(const ScreenValidationResult& result,
                                  const std::filesystem::path& path) {
  std::string text = "strength,r,d_hat,d_theory\n";
  for (const auto& row : result.rows) {
    text += format_double(row.strength) + "," + format_double(row.r) + "," +
            format_double(row.d_hat) + "," + format_double(row.d_theory) + "\n";
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

namespace {

std::vector<ThermoReport> curve_with_band(const TransitionMatrix& t, const RunConfig& config,
                                          bool with_bands, const fs::path& csv_path) {
  const std::vector<double> betas = config.beta_values();
  const std::vector<ThermoReport> reports = thermo_curve(t, betas);
  if (!with_bands) {
    write_thermo_csv(reports, csv_path);
    return reports;
  }
  // Bands for a matrix input resample synthetic counts drawn from the
  // matrix's own conditionals (flat input weights).
  const CountsMatrix counts = synth_counts(t, config.total_counts);
  const ConfidenceBand band = confidence_band(counts, make_counts_pipeline(Direction::Forward,
                                                                           betas),
                                              config.noise(), config.trials, 0.95,
                                              config.threads);
  write_thermo_csv(reports, csv_path, &band);
  return reports;
}

}  // namespace

std::vector<std::filesystem::path> run_analyze(const std::vector<std::filesystem::path>& inputs,
                                               const RunConfig& config,
                                               const AnalyzeOptions& options, std::ostream* log) {
  config.validate();
  if (inputs.empty()) throw ValidationError("analyze: no input files");
  const fs::path out_dir(config.output_dir);
  fs::create_directories(out_dir);

  std::optional<Manifest> manifest;
  if (options.manifest) manifest = read_manifest(*options.manifest);

  std::vector<fs::path> written;
  for (const fs::path& input : inputs) {
    if (manifest) verify_against_manifest(*manifest, input);
    const std::string stem = input.stem().string();
    const std::string ext = input.extension().string();
    if (ext == ".json") {
      const TransitionMatrix t = read_transition_json(input);
      const fs::path csv = out_dir / (stem + "_thermo.csv");
      curve_with_band(t, config, options.with_bands, csv);
      written.push_back(csv);
      if (log) *log << "wrote " << csv.string() << "\n";
    } else if (ext == ".csv") {
      const CountsMatrix counts = read_counts_csv(input);
      for (Direction dir : config.directions) {
        const TransitionMatrix t = dir == Direction::Forward ? forward_from_counts(counts)
                                                             : backward_from_counts(counts);
        const std::vector<double> betas = config.beta_values();
        const std::vector<ThermoReport> reports = thermo_curve(t, betas);
        const fs::path csv = out_dir / (stem + "_" + to_string(dir) + "_thermo.csv");
        if (options.with_bands) {
          const ConfidenceBand band =
              confidence_band(counts, make_counts_pipeline(dir, betas), config.noise(),
                              config.trials, 0.95, config.threads);
          write_thermo_csv(reports, csv, &band);
        } else {
          write_thermo_csv(reports, csv);
        }
        written.push_back(csv);
        if (log) *log << "wrote " << csv.string() << "\n";
      }
    } else {
      throw FormatError("analyze: unrecognized input type '" + ext + "' for " + input.string() +
                        " (expected .json matrix or .csv counts)");
    }
  }
  return written;
}

std::filesystem::path run_ingest(const std::filesystem::path& counts_csv, Direction direction,
                                 const RunConfig& config, std::ostream* log) {
  const fs::path out_dir(config.output_dir);
  fs::create_directories(out_dir);
  const CountsMatrix counts = read_counts_csv(counts_csv);
  const TransitionMatrix t = direction == Direction::Forward ? forward_from_counts(counts)
                                                             : backward_from_counts(counts);
  const fs::path file =
      out_dir / (counts_csv.stem().string() + "_" + to_string(direction) + ".json");
  write_transition_json(t, file);
  if (log) *log << "wrote " << file.string() << "\n";
  return file;
}

}  // namespace oamsim
