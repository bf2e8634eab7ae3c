#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavemaps/bourgain.hpp"
#include "wavemaps/harness.hpp"

namespace wm {

using Json = nlohmann::ordered_json;

/// Complete default configuration. Every accepted key appears here; files
/// and overrides may only set keys that already exist.
Json default_config();

/// Prefix of environment overrides: WMSOLVE_<SECTION>__<KEY>=value.
inline constexpr const char* kEnvPrefix = "WMSOLVE_";

/// Merges a config file (or the "config" member of a run manifest) onto
/// the defaults. Throws ConfigError on parse errors, unknown keys and type
/// mismatches.
Json load_config(const std::filesystem::path& path);
void merge_config(Json& base, const Json& patch, const std::string& where = "");

/// Applies "section.key=value"; the value is parsed according to the type
/// already stored under that key.
void apply_override(Json& cfg, const std::string& assignment);

/// Applies every WMSOLVE_ variable found in env (a null-terminated array).
void apply_environment(Json& cfg, char** env);

GridSpec grid_from(const Json& cfg);
SchemeParams scheme_from(const Json& cfg);
DataSpec data_from(const Json& cfg);
StudyConfig study_from(const Json& cfg);

struct DiagnosticsConfig {
  std::uint64_t seed = 1;
  std::vector<std::string> suites;
  std::size_t identity_n = 128;
  std::size_t identity_m = 32;
  double identity_tau = 0.05;
  double identity_period = 20.0;
  double tol_null_identity = 1e-10;
  double tol_box_symbol = 1e-10;
  double tol_parseval = 1e-12;
  double tol_group_law = 1e-12;
  double tol_energy = 1e-12;
  std::vector<std::string> vanishing_cases;
  std::size_t vanishing_trials = 20;
  std::size_t control_trials = 5;
  bool controls = true;
  double tol_vanishing = 1e-10;
  double control_threshold = 1e-4;
  std::vector<std::string> strichartz_pairs;
  std::vector<double> strichartz_taus;
  std::size_t strichartz_trials = 50;
  int strichartz_k = 3;
  double tol_strichartz_spread = 2.0;
};

DiagnosticsConfig diagnostics_from(const Json& cfg);

}  // namespace wm
