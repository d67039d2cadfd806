// SPDX-License-Identifier: Apache-2.0
//
// oamsim: simulate OAM crosstalk channels under Kolmogorov turbulence and
// analyze them through work distributions and fluctuation relations.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "oamsim/config.hpp"
#include "oamsim/errors.hpp"
#include "oamsim/io.hpp"
#include "oamsim/runner.hpp"

namespace {

using oamsim::RunConfig;

struct Overrides {
  std::optional<std::string> config_file;
  std::optional<int> grid_n;
  std::optional<double> side_length;
  std::optional<double> w0;
  std::optional<int> l_max;
  std::vector<double> strengths;
  std::optional<int> n_masks;
  std::vector<std::string> sidedness;
  std::optional<double> separation_z;
  std::vector<std::string> directions;
  std::optional<double> beta_start;
  std::optional<double> beta_stop;
  std::optional<double> beta_step;
  std::optional<bool> poisson;
  std::optional<double> pump_sigma;
  std::optional<std::uint64_t> noise_seed;
  std::optional<int> trials;
  std::optional<long long> total_counts;
  std::optional<std::uint64_t> master_seed;
  std::optional<std::string> output_dir;
  std::optional<int> threads;
};

void add_config_flags(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--config", o.config_file, "JSON config file; flags override its fields");
  cmd.add_option("--grid-n", o.grid_n, "samples per grid side (even, >= 64)");
  cmd.add_option("--side-length", o.side_length, "window width in units of w0");
  cmd.add_option("--w0", o.w0, "beam waist (working length unit)");
  cmd.add_option("--l-max", o.l_max, "OAM truncation |l| <= l_max");
  cmd.add_option("--strengths", o.strengths, "scintillation strengths w0/r0")->delimiter(',');
  cmd.add_option("--n-masks", o.n_masks, "turbulence masks per channel estimate");
  cmd.add_option("--sidedness", o.sidedness, "single and/or double")->delimiter(',');
  cmd.add_option("--separation-z", o.separation_z,
                 "double-sided screen separation (Rayleigh-range units)");
  cmd.add_option("--directions", o.directions, "forward and/or backward")->delimiter(',');
  cmd.add_option("--beta-start", o.beta_start, "inverse-temperature grid start");
  cmd.add_option("--beta-stop", o.beta_stop, "inverse-temperature grid stop (inclusive)");
  cmd.add_option("--beta-step", o.beta_step, "inverse-temperature grid step");
  cmd.add_flag("--poisson,!--no-poisson", o.poisson, "Poisson shot noise on counts");
  cmd.add_option("--pump-sigma", o.pump_sigma, "common-mode pump fluctuation fraction");
  cmd.add_option("--noise-seed", o.noise_seed, "noise-model seed");
  cmd.add_option("--trials", o.trials, "Monte-Carlo trials per confidence band");
  cmd.add_option("--total-counts", o.total_counts, "total synthetic coincidences");
  cmd.add_option("--master-seed", o.master_seed, "master seed for the sweep");
  cmd.add_option("--output-dir", o.output_dir, "output directory");
  cmd.add_option("--threads", o.threads, "worker threads (0 = hardware); never changes results");
}

RunConfig build_config(const Overrides& o) {
  RunConfig c =
      o.config_file ? oamsim::load_run_config(*o.config_file) : oamsim::default_run_config();
  if (o.grid_n) c.grid_n = *o.grid_n;
  if (o.side_length) c.side_length = *o.side_length;
  if (o.w0) c.w0 = *o.w0;
  if (o.l_max) c.l_max = *o.l_max;
  if (!o.strengths.empty()) c.strengths = o.strengths;
  if (o.n_masks) c.n_masks = *o.n_masks;
  if (!o.sidedness.empty()) {
    c.sidedness.clear();
    for (const std::string& s : o.sidedness) c.sidedness.push_back(oamsim::sidedness_from_string(s));
  }
  if (o.separation_z) c.separation_z = *o.separation_z;
  if (!o.directions.empty()) {
    c.directions.clear();
    for (const std::string& d : o.directions)
      c.directions.push_back(oamsim::direction_from_string(d));
  }
  if (o.beta_start) c.betas.start = *o.beta_start;
  if (o.beta_stop) c.betas.stop = *o.beta_stop;
  if (o.beta_step) c.betas.step = *o.beta_step;
  if (o.poisson) c.noise_poisson = *o.poisson;
  if (o.pump_sigma) c.pump_sigma = *o.pump_sigma;
  if (o.noise_seed) c.noise_seed = *o.noise_seed;
  if (o.trials) c.trials = *o.trials;
  if (o.total_counts) c.total_counts = *o.total_counts;
  if (o.master_seed) c.master_seed = *o.master_seed;
  if (o.output_dir) c.output_dir = *o.output_dir;
  if (o.threads) c.threads = *o.threads;
  // CI hook: OAMSIM_SEED overrides the master seed from any source.
  if (const char* env = std::getenv("OAMSIM_SEED")) c.master_seed = std::stoull(env);
  c.validate();
  return c;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"OAM turbulence channel simulator and fluctuation-relation analyzer"};
  app.require_subcommand(1);

  Overrides o;

  CLI::App* validate = app.add_subcommand(
      "validate-screens", "check phase-screen statistics against the structure function");
  int n_screens = 200;
  int subharmonics = 3;
  double tolerance = 0.15;
  validate->add_option("--screens", n_screens, "screens per ensemble (>= 100)");
  validate->add_option("--subharmonics", subharmonics,
                       "subharmonic octaves (0 disables the low-frequency correction)");
  validate->add_option("--tolerance", tolerance, "relative structure-function tolerance");
  add_config_flags(*validate, o);

  CLI::App* simulate =
      app.add_subcommand("simulate", "run the strength sweep and write transition matrices");
  add_config_flags(*simulate, o);

  CLI::App* analyze =
      app.add_subcommand("analyze", "compute per-beta fluctuation reports from matrices/counts");
  std::vector<std::string> analyze_inputs;
  bool with_bands = false;
  std::string manifest_file;
  analyze->add_option("inputs", analyze_inputs, "transition .json and/or counts .csv files")
      ->required();
  analyze->add_flag("--bands", with_bands, "append Monte-Carlo confidence bands");
  analyze->add_option("--manifest", manifest_file, "verify input hashes against this manifest");
  add_config_flags(*analyze, o);

  CLI::App* ingest =
      app.add_subcommand("ingest", "convert a counts CSV into a transition-matrix JSON");
  std::string ingest_input;
  std::string ingest_direction = "forward";
  ingest->add_option("input", ingest_input, "counts CSV file")->required();
  ingest->add_option("--direction", ingest_direction, "forward or backward");
  add_config_flags(*ingest, o);

  CLI11_PARSE(app, argc, argv);

  const RunConfig config = build_config(o);

  if (validate->parsed()) {
    const oamsim::ScreenValidationResult result =
        oamsim::validate_screens(config, n_screens, subharmonics, tolerance, &std::cout);
    std::filesystem::create_directories(config.output_dir);
    const std::filesystem::path csv =
        std::filesystem::path(config.output_dir) / "structure_function.csv";
    oamsim::write_structure_function_csv(result, csv);
    std::cout << "wrote " << csv.string() << "\n";
    std::cout << (result.pass ? "PASS" : "FAIL") << ": worst relative error "
              << oamsim::format_double(result.worst_rel_error) << " (tolerance "
              << oamsim::format_double(result.tolerance) << ")\n";
    return result.pass ? 0 : 2;
  }
  if (simulate->parsed()) {
    oamsim::run_simulate(config, &std::cout);
    return 0;
  }
  if (analyze->parsed()) {
    oamsim::AnalyzeOptions options;
    options.with_bands = with_bands;
    if (!manifest_file.empty()) options.manifest = manifest_file;
    std::vector<std::filesystem::path> inputs(analyze_inputs.begin(), analyze_inputs.end());
    oamsim::run_analyze(inputs, config, options, &std::cout);
    return 0;
  }
  if (ingest->parsed()) {
    oamsim::run_ingest(ingest_input, oamsim::direction_from_string(ingest_direction), config,
                       &std::cout);
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const oamsim::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const oamsim::FormatError& e) {
    std::cerr << "input format error: " << e.what() << "\n";
    return 3;
  } catch (const oamsim::InvariantError& e) {
    std::cerr << "numerical invariant violation: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
