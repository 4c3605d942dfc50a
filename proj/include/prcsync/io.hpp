#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "prcsync/bvp.hpp"
#include "prcsync/prc.hpp"

namespace prcsync {

inline constexpr const char* kVersion = "0.1.0";

/// {"cos": [...], "sin": [...]} with the sin list starting at frequency 1.
nlohmann::json prc_to_json(const Prc& prc);
Prc prc_from_json(const nlohmann::json& j);
Prc load_prc_file(const std::filesystem::path& path);

/// {"cos", "sin", "nu1", "sigma", "residuals": {"ode", "constraint", "periodicity"}}.
nlohmann::json solution_to_json(const BvpSolution& sol);

/// Everything a CLI run depends on. Serialised into every sidecar so the run
/// can be repeated from the sidecar alone.
struct RunConfig {
  std::string command;
  double a = 1.0, b = 0.0, c = 0.0;
  double sigma = 0.05;
  std::vector<double> sigmas;
  std::string prc = "type2";
  nlohmann::json prc_coeffs;  // set when the PRC came from a file
  std::string method;
  std::vector<std::string> methods;
  int order = 4;
  int grid = 512;
  int bins = 32;
  int modes = 32;
  double dt = 1e-3;
  double duration = 10.0;
  double burn_in = 100.0;
  double theta0 = 0.0;
  int realizations = 32;
  int oscillators = 0;
  int record_every = 1;
  std::uint64_t seed = 0;
  std::string out = "prcsync";
  std::string format = "csv";
};

void to_json(nlohmann::json& j, const RunConfig& cfg);
void from_json(const nlohmann::json& j, RunConfig& cfg);

/// Column table written as CSV (header row, %.17g values) or as a JSON
/// object of arrays. Throws InvalidArgument on ragged columns and Error on
/// I/O failure.
void write_table(const std::filesystem::path& path, const std::string& format,
                 const std::vector<std::string>& headers,
                 const std::vector<std::vector<double>>& columns);

/// As write_table with a leading text column.
void write_labelled_table(const std::filesystem::path& path, const std::string& format,
                          const std::string& label_header, const std::vector<std::string>& labels,
                          const std::vector<std::string>& headers,
                          const std::vector<std::vector<double>>& columns);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

/// {"config", "version", "timings", "results"}.
nlohmann::json make_sidecar(const RunConfig& cfg, const nlohmann::json& timings,
                            const nlohmann::json& results);

}  // namespace prcsync
