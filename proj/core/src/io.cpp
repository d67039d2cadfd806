// SPDX-License-Identifier: Apache-2.0
#include "oamsim/io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oamsim/errors.hpp"

namespace oamsim {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
  if (!out) throw ValidationError("write failed for " + path.string());
}

[[noreturn]] void fail_line(const std::filesystem::path& path, std::size_t line,
                            const std::string& what) {
  throw FormatError(path.string() + ": line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string sha256_file(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw InvariantError("sha256: digest computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string format_double(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) throw InvariantError("format_double: conversion failed");
  return std::string(buffer, ptr);
}

void write_counts_csv(const CountsMatrix& counts, const std::filesystem::path& path) {
  const int d = counts.dim();
  if (counts.counts.rows() != d || counts.counts.cols() != d)
    throw ValidationError("write_counts_csv: counts shape does not match l_max");
  std::ostringstream out;
  out << "#accumulation_s=" << format_double(counts.accumulation_s) << "\n";
  out << "#gate_ns=" << format_double(counts.gate_ns) << "\n";
  out << "#pump_sigma=" << format_double(counts.pump_sigma) << "\n";
  out << "l_in";
  for (int ell = -counts.l_max; ell <= counts.l_max; ++ell) out << "," << ell;
  out << "\n";
  for (int i = 0; i < d; ++i) {
    out << (i - counts.l_max);
    for (int j = 0; j < d; ++j) out << "," << counts.counts(i, j);
    out << "\n";
  }
  write_file(path, out.str());
}

CountsMatrix read_counts_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());

  CountsMatrix counts;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  int expected_row = 0;
  int d = 0;

  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = s.find(',', start);
      if (comma == std::string::npos) {
        cells.push_back(s.substr(start));
        return cells;
      }
      cells.push_back(s.substr(start, comma - start));
      start = comma + 1;
    }
  };
  auto parse_ll = [&](const std::string& cell, std::size_t ln) {
    long long value = 0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
      fail_line(path, ln, "expected an integer, got '" + cell + "'");
    return value;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos) fail_line(path, line_no, "metadata line without '='");
      const std::string key = line.substr(1, eq - 1);
      const std::string value = line.substr(eq + 1);
      try {
        if (key == "accumulation_s") counts.accumulation_s = std::stod(value);
        else if (key == "gate_ns") counts.gate_ns = std::stod(value);
        else if (key == "pump_sigma") counts.pump_sigma = std::stod(value);
        else fail_line(path, line_no, "unknown metadata key '" + key + "'");
      } catch (const std::invalid_argument&) {
        fail_line(path, line_no, "bad numeric value '" + value + "'");
      }
      continue;
    }
    if (!have_header) {
      const std::vector<std::string> cells = split(line);
      if (cells.empty() || cells[0] != "l_in")
        fail_line(path, line_no, "header must start with 'l_in'");
      if (cells.size() < 4 || cells.size() % 2 != 0)
        fail_line(path, line_no, "header must list an odd number (>= 3) of output labels");
      d = static_cast<int>(cells.size()) - 1;
      counts.l_max = (d - 1) / 2;
      for (int j = 0; j < d; ++j) {
        const long long label = parse_ll(cells[static_cast<std::size_t>(j) + 1], line_no);
        if (label != j - counts.l_max)
          fail_line(path, line_no,
                    "output labels must run from " + std::to_string(-counts.l_max) + " to " +
                        std::to_string(counts.l_max) + " ascending");
      }
      counts.counts = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(d, d);
      have_header = true;
      continue;
    }
    if (expected_row >= d) fail_line(path, line_no, "more rows than output labels");
    const std::vector<std::string> cells = split(line);
    if (static_cast<int>(cells.size()) != d + 1)
      fail_line(path, line_no, "expected " + std::to_string(d + 1) + " cells, got " +
                                   std::to_string(cells.size()));
    const long long label = parse_ll(cells[0], line_no);
    if (label != expected_row - counts.l_max)
      fail_line(path, line_no, "row labels must run from " + std::to_string(-counts.l_max) +
                                   " to " + std::to_string(counts.l_max) + " ascending");
    for (int j = 0; j < d; ++j) {
      const long long value = parse_ll(cells[static_cast<std::size_t>(j) + 1], line_no);
      if (value < 0) fail_line(path, line_no, "negative count");
      counts.counts(expected_row, j) = value;
    }
    ++expected_row;
  }
  if (!have_header) throw FormatError(path.string() + ": missing header row");
  if (expected_row != d)
    throw FormatError(path.string() + ": expected " + std::to_string(d) + " data rows, got " +
                      std::to_string(expected_row));
  if (counts.accumulation_s <= 0 || counts.gate_ns <= 0 || counts.pump_sigma < 0)
    throw FormatError(path.string() + ": metadata fields must be positive");
  return counts;
}

void write_transition_json(const TransitionMatrix& t, const std::filesystem::path& path,
                           const std::optional<TransitionMeta>& meta) {
  validate_column_stochastic(t, 1e-9);
  const int d = t.dim();
  json j;
  j["dim"] = d;
  j["l_max"] = t.l_max;
  j["direction"] = to_string(t.direction);
  j["provenance"] = to_string(t.provenance);
  j["leakage"] = t.leakage;
  json columns = json::array();
  for (int c = 0; c < d; ++c) {
    json column = json::array();
    for (int r = 0; r < d; ++r) column.push_back(t.p(r, c));
    columns.push_back(std::move(column));
  }
  j["columns"] = std::move(columns);
  json m;
  m["input_convention"] = "l_in = -l_signal (anti-correlated pair source)";
  m["delta_convention"] = "delta = sum_l p_beta(l) (rowsum_l - 1)";
  if (meta) {
    m["strength"] = meta->strength;
    m["strength_index"] = meta->strength_index;
    m["sidedness"] = to_string(meta->sidedness);
    m["n_masks"] = meta->n_masks;
    m["separation_z"] = meta->separation_z;
    m["master_seed"] = meta->master_seed;
    m["grid"] = {{"n", meta->grid_n}, {"side_length", meta->side_length}, {"w0", meta->w0}};
  }
  j["meta"] = std::move(m);
  write_file(path, j.dump(2) + "\n");
}

TransitionMatrix read_transition_json(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  TransitionMatrix t;
  try {
    t.l_max = j.at("l_max").get<int>();
    const int d = j.at("dim").get<int>();
    if (d != 2 * t.l_max + 1)
      throw FormatError(path.string() + ": dim does not equal 2*l_max+1");
    t.direction = direction_from_string(j.at("direction").get<std::string>());
    t.provenance = provenance_from_string(j.at("provenance").get<std::string>());
    t.leakage = j.at("leakage").get<std::vector<double>>();
    const auto& columns = j.at("columns");
    if (static_cast<int>(columns.size()) != d)
      throw FormatError(path.string() + ": expected " + std::to_string(d) + " columns");
    t.p.resize(d, d);
    for (int c = 0; c < d; ++c) {
      const auto& column = columns[static_cast<std::size_t>(c)];
      if (static_cast<int>(column.size()) != d)
        throw FormatError(path.string() + ": column " + std::to_string(c) + " has wrong length");
      for (int r = 0; r < d; ++r) t.p(r, c) = column[static_cast<std::size_t>(r)].get<double>();
    }
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  validate_column_stochastic(t, 1e-9);
  return t;
}

void write_thermo_csv(const std::vector<ThermoReport>& reports, const std::filesystem::path& path,
                      const ConfidenceBand* band) {
  std::ostringstream out;
  out << "#delta_f=0\n";
  out << "#delta_convention=sum_l p_beta(l) (rowsum_l - 1)\n";
  if (band) {
    out << "#band_level=" << format_double(band->level) << "\n";
    out << "#band_trials=" << band->trials << "\n";
    if (band->betas.size() != reports.size())
      throw ValidationError("write_thermo_csv: band beta grid does not match reports");
  }
  out << "beta,jarzynski,delta,mean_work,bound,deviation_generalized,deviation_classic";
  if (band)
    for (const std::string& q : band_quantities()) out << "," << q << "_lo," << q << "_hi";
  out << "\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const ThermoReport& r = reports[i];
    out << format_double(r.beta) << "," << format_double(r.jarzynski) << ","
        << format_double(r.delta) << "," << format_double(r.mean_work) << ","
        << format_double(r.bound) << "," << format_double(r.deviation_generalized) << ","
        << format_double(r.deviation_classic);
    if (band)
      for (const auto& [name, series] : band->bands)
        out << "," << format_double(series.lo[i]) << "," << format_double(series.hi[i]);
    out << "\n";
  }
  write_file(path, out.str());
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  json j;
  j["format"] = "oamsim-manifest-v1";
  j["config"] = json::parse(run_config_to_json_string(manifest.config));
  j["strengths"] = manifest.strengths;
  j["betas"] = manifest.betas;
  json entries = json::array();
  for (const ManifestEntry& e : manifest.entries) {
    entries.push_back({{"file", e.file},
                       {"sha256", e.sha256},
                       {"strength_index", e.strength_index},
                       {"strength", e.strength},
                       {"sidedness", to_string(e.sidedness)},
                       {"direction", to_string(e.direction)}});
  }
  j["entries"] = std::move(entries);
  write_file(path, j.dump(2) + "\n");
}

Manifest read_manifest(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  Manifest manifest;
  try {
    if (j.at("format").get<std::string>() != "oamsim-manifest-v1")
      throw FormatError(path.string() + ": unknown manifest format");
    manifest.config = run_config_from_json_string(j.at("config").dump());
    manifest.strengths = j.at("strengths").get<std::vector<double>>();
    manifest.betas = j.at("betas").get<std::vector<double>>();
    for (const auto& e : j.at("entries")) {
      ManifestEntry entry;
      entry.file = e.at("file").get<std::string>();
      entry.sha256 = e.at("sha256").get<std::string>();
      entry.strength_index = e.at("strength_index").get<int>();
      entry.strength = e.at("strength").get<double>();
      entry.sidedness = sidedness_from_string(e.at("sidedness").get<std::string>());
      entry.direction = direction_from_string(e.at("direction").get<std::string>());
      manifest.entries.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return manifest;
}

void verify_against_manifest(const Manifest& manifest, const std::filesystem::path& file) {
  const std::string name = file.filename().string();
  for (const ManifestEntry& entry : manifest.entries) {
    if (entry.file != name) continue;
    const std::string actual = sha256_file(file);
    if (actual != entry.sha256)
      throw ValidationError("manifest: hash mismatch for " + name + " (expected " +
                            entry.sha256 + ", got " + actual + ")");
    return;
  }
  throw ValidationError("manifest: no entry for " + name);
}

}  // namespace oamsim
