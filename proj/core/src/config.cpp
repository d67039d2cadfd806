// SPDX-License-Identifier: Apache-2.0
#include "oamsim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "oamsim/errors.hpp"

namespace oamsim {

using nlohmann::json;

std::vector<double> BetaGrid::expand() const {
  if (!(step > 0.0)) throw ValidationError("betas: step must be positive");
  if (stop < start) throw ValidationError("betas: stop < start");
  const int n_steps = static_cast<int>(std::floor((stop - start) / step + 0.5));
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n_steps) + 1);
  for (int i = 0; i <= n_steps; ++i) values.push_back(start + i * step);
  return values;
}

GridSpec RunConfig::grid() const { return make_grid(grid_n, side_length); }

NoiseModel RunConfig::noise() const { return NoiseModel{noise_poisson, pump_sigma, noise_seed}; }

void RunConfig::validate() const {
  grid();  // throws on bad n / side_length
  if (!(w0 > 0.0)) throw ValidationError("config: w0 must be positive");
  if (l_max < 1) throw ValidationError("config: l_max must be >= 1");
  if (strengths.empty()) throw ValidationError("config: empty strength sweep");
  for (double s : strengths)
    if (s < 0.0) throw ValidationError("config: negative scintillation strength");
  if (n_masks < 1) throw ValidationError("config: n_masks must be >= 1");
  if (sidedness.empty()) throw ValidationError("config: empty sidedness list");
  if (directions.empty()) throw ValidationError("config: empty directions list");
  if (separation_z < 0.0) throw ValidationError("config: negative separation_z");
  noise().validate();
  if (trials < 1) throw ValidationError("config: trials must be >= 1");
  if (total_counts < 1) throw ValidationError("config: total_counts must be >= 1");
  if (threads < 0) throw ValidationError("config: threads must be >= 0");
  if (output_dir.empty()) throw ValidationError("config: empty output_dir");
  betas.expand();
}

std::vector<double> default_strengths() {
  std::vector<double> s;
  for (int i = 0; i <= 20; ++i) s.push_back(0.2 * i);
  return s;
}

RunConfig default_run_config() {
  RunConfig config;
  config.strengths = default_strengths();
  return config;
}

namespace {

json sidedness_list(const std::vector<Sidedness>& values) {
  json out = json::array();
  for (Sidedness s : values) out.push_back(to_string(s));
  return out;
}

json direction_list(const std::vector<Direction>& values) {
  json out = json::array();
  for (Direction d : values) out.push_back(to_string(d));
  return out;
}

void check_keys(const json& object, const std::set<std::string>& allowed,
                const std::string& where) {
  for (const auto& [key, value] : object.items())
    if (!allowed.contains(key))
      throw FormatError("config: unknown key '" + key + "' in " + where);
}

}  // namespace

std::string run_config_to_json_string(const RunConfig& c) {
  json j;
  j["grid"] = {{"n", c.grid_n}, {"side_length", c.side_length}, {"w0", c.w0}};
  j["l_max"] = c.l_max;
  j["strengths"] = c.strengths;
  j["n_masks"] = c.n_masks;
  j["sidedness"] = sidedness_list(c.sidedness);
  j["separation_z"] = c.separation_z;
  j["directions"] = direction_list(c.directions);
  j["betas"] = {{"start", c.betas.start}, {"stop", c.betas.stop}, {"step", c.betas.step}};
  j["noise"] = {{"poisson", c.noise_poisson}, {"pump_sigma", c.pump_sigma}, {"seed", c.noise_seed}};
  j["trials"] = c.trials;
  j["total_counts"] = c.total_counts;
  j["master_seed"] = c.master_seed;
  j["output_dir"] = c.output_dir;
  // `threads` is a runtime knob, not an experiment parameter: it never
  // changes results, so it stays out of configs and manifests.
  return j.dump(2) + "\n";
}

RunConfig run_config_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  RunConfig c = default_run_config();
  try {
    check_keys(j, {"grid", "l_max", "strengths", "n_masks", "sidedness", "separation_z",
                   "directions", "betas", "noise", "trials", "total_counts", "master_seed",
                   "output_dir"},
               "top level");
    if (j.contains("grid")) {
      check_keys(j["grid"], {"n", "side_length", "w0"}, "grid");
      c.grid_n = j["grid"].value("n", c.grid_n);
      c.side_length = j["grid"].value("side_length", c.side_length);
      c.w0 = j["grid"].value("w0", c.w0);
    }
    c.l_max = j.value("l_max", c.l_max);
    if (j.contains("strengths")) c.strengths = j["strengths"].get<std::vector<double>>();
    c.n_masks = j.value("n_masks", c.n_masks);
    if (j.contains("sidedness")) {
      c.sidedness.clear();
      for (const auto& s : j["sidedness"]) c.sidedness.push_back(sidedness_from_string(s));
    }
    c.separation_z = j.value("separation_z", c.separation_z);
    if (j.contains("directions")) {
      c.directions.clear();
      for (const auto& d : j["directions"]) c.directions.push_back(direction_from_string(d));
    }
    if (j.contains("betas")) {
      check_keys(j["betas"], {"start", "stop", "step"}, "betas");
      c.betas.start = j["betas"].value("start", c.betas.start);
      c.betas.stop = j["betas"].value("stop", c.betas.stop);
      c.betas.step = j["betas"].value("step", c.betas.step);
    }
    if (j.contains("noise")) {
      check_keys(j["noise"], {"poisson", "pump_sigma", "seed"}, "noise");
      c.noise_poisson = j["noise"].value("poisson", c.noise_poisson);
      c.pump_sigma = j["noise"].value("pump_sigma", c.pump_sigma);
      c.noise_seed = j["noise"].value("seed", c.noise_seed);
    }
    c.trials = j.value("trials", c.trials);
    c.total_counts = j.value("total_counts", c.total_counts);
    c.master_seed = j.value("master_seed", c.master_seed);
    c.output_dir = j.value("output_dir", c.output_dir);
  } catch (const json::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("config: cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return run_config_from_json_string(text);
}

}  // namespace oamsim
