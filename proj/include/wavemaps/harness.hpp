#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wavemaps/refsol.hpp"
#include "wavemaps/timestepper.hpp"

namespace wm {

enum class DataSource { geodesic_smooth, geodesic_rough, fig1_1d, custom_file, constant_map };
enum class Reference { exact, finest_tau, rk4_oracle };

std::string to_string(DataSource d);
std::string to_string(Reference r);
DataSource data_source_from_string(const std::string& s);
Reference reference_from_string(const std::string& s);

struct DataSpec {
  DataSource source = DataSource::geodesic_smooth;
  double amplitude = 1.0;  // geodesic-smooth: theta0 = amplitude exp(-x^2/width^2)
  double width = 1.0;
  double s = 1.7;          // geodesic-rough regularity
  std::uint64_t seed = 0;
  bool random_phases = false;
  std::string path;        // custom-file snapshot with columns u1..u3, v1..v3
  std::array<double, 3> point{0.0, 0.0, 1.0};  // constant-map value
};

/// Angle data when the source is a geodesic wave map.
std::optional<GeodesicData> geodesic_data(const DataSpec& d, const GridSpec& grid);

/// Initial state at time 0 (unfiltered).
StatePair initial_state(const DataSpec& d, const GridSpec& grid);

/// Exact solution at time t when one is known for the source.
std::optional<StatePair> exact_state(const DataSpec& d, const GridSpec& grid, double t);

struct StudyConfig {
  GridSpec grid{1, 1024, 20.0};
  DataSpec data;
  std::vector<double> taus;   // strictly decreasing, each dividing t_final
  double t_final = 0.5;
  double s1 = 0.0;            // u error in H^{s1}, v error in H^{s1-1}
  Reference reference = Reference::exact;
  double filter_constant = 100.0;
  int activation_steps = 2;
  FilterMode filter_mode = FilterMode::literal;
  double null_form_scale = 0.5;
  int oracle_refinement = 16;  // tau_fine = min(taus) / oracle_refinement
  unsigned threads = 1;
  bool record_wall_time = false;

  /// Throws ValidationError for an invalid ladder or any (tau, grid) pair
  /// the scheme validator rejects.
  void validate() const;
  SchemeParams scheme(double tau) const;
};

struct StudyRow {
  double tau = 0.0;
  double err_u = 0.0;
  double err_v = 0.0;
  double err_total = 0.0;
  double sphere_dev = 0.0;
  std::size_t steps = 0;
  double wall_ms = 0.0;          // measured
  std::string status = "ok";     // ok, blowup, reference
  std::size_t attenuated = 0;    // modes with 0 < chi < 1
  std::size_t annihilated = 0;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // max |log2 err - fit|
  std::size_t used = 0;
  std::vector<std::string> warnings;
};

struct ConvergenceReport {
  std::vector<StudyRow> rows;  // tau descending
  std::optional<FitResult> fit;
  std::string config_echo;     // filled by the caller, e.g. JSON
  std::string version;
  bool record_wall_time = false;
};

/// Least-squares slope of log2(err) against log2(tau). Nonpositive or
/// non-finite errors are skipped with a warning; fewer than two usable
/// pairs throws ValidationError.
FitResult fit_rate(const std::vector<std::pair<double, double>>& pairs);

struct OracleParams {
  double tau_fine = 1e-3;
  double t_final = 0.5;
  double filter_constant = 100.0;
  double filter_tau = 1e-2;   // Pi = chi(c filter_tau^{1/2} |k|)
  bool nonlinear = true;
};

/// Classical RK4 for u' = v, v' = Lap u - Pi[Pi u (|Pi v|^2 - |grad Pi u|^2)]
/// started from Pi s0. Throws ValidationError naming the required tau_fine
/// when the step is outside the RK4 stability interval.
StatePair rk4_oracle(const StatePair& s0, const OracleParams& p);

/// Largest tau_fine the oracle accepts for this filter band.
double rk4_max_step(const GridSpec& grid, double filter_tau, double filter_constant);

/// Sobolev distance pair (||du||_{H^s1}, ||dv||_{H^{s1-1}}).
std::pair<double, double> state_error(const StatePair& a, const StatePair& b, double s1);

ConvergenceReport run_study(const StudyConfig& c);

std::string version_string();

}  // namespace wm
