#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "trispin/engine.hpp"

namespace trispin {

inline const std::vector<std::string> kExperiments = {"degeneracy", "criticality", "duality",
                                                      "hexagon", "couplings", "solve"};

/// Effective configuration of one run. Every field has a JSON key of the
/// same spelling (see to_json); unknown keys are rejected.
struct RunConfig {
  std::string experiment;

  // model and lattice
  int N = 0;  // 0 picks the experiment default
  std::optional<bool> periodic;
  double Bx = 0.0;
  std::string Bx_grid = "0.2:2.0:0.1";
  std::vector<double> tau = {-3.0, 2.0, 3.0};
  double boundary_field = 10.0;
  std::string grid = "0.01:0.15:0.01";
  double U_uu = 2.12;
  double U_dd = 2.12;
  double U_ud = 1.0;
  int n_max = 3;
  std::vector<int> duality_sizes = {9, 12, 15};
  std::string hamiltonian;  // operator file for `solve`

  // solver
  double tol = 1e-10;
  int max_iter = 2000;
  int k = 1;
  std::uint64_t seed = 20240531;
  int block_size = 0;
  int threads = 0;  // 0: TRISPIN_THREADS, then the hardware count

  // output
  std::string out_dir = "./runs";
  bool bits = false;              // entropy CSV in bits
  bool dump_hamiltonian = false;  // write the operators next to the data

  /// N and periodic with experiment defaults applied.
  int sites() const;
  bool is_periodic() const;
  SolverOptions solver() const;
};

/// Validates `file_doc` (a config object, or a run manifest whose "config"
/// member is used) and then applies `overrides` on top. Throws ConfigError
/// naming the offending key and the expected type.
RunConfig parse_config(const nlohmann::json& file_doc, const nlohmann::json& overrides = {});

RunConfig parse_config_file(const std::string& path, const nlohmann::json& overrides = {});

nlohmann::json to_json(const RunConfig& cfg);

/// "a:b:step" into a grid; ConfigError on malformed input.
std::vector<double> parse_range(const std::string& key, const std::string& text);

/// Runs the configured experiment, writes `<out_dir>/<experiment>_<stamp>/`
/// with manifest.json and data_*.csv. Returns 0 on success, 1 on numerical
/// failure, 2 on configuration error. Progress and errors go to `log`.
int dispatch(const RunConfig& cfg, std::ostream& log);

}  // namespace trispin
