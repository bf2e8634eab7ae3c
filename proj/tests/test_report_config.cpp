#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "wavemaps/config.hpp"
#include "wavemaps/report.hpp"

using namespace wm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("wavemaps_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

ConvergenceReport six_rows() {
  ConvergenceReport r;
  r.version = "test";
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 6; ++i) {
    StudyRow row;
    row.tau = std::ldexp(0.5, -6 - i);
    row.err_u = 2.0 * row.tau;
    row.err_v = row.tau;
    row.err_total = 3.0 * row.tau;
    row.sphere_dev = 0.1 * row.tau;
    row.steps = static_cast<std::size_t>(std::llround(0.5 / row.tau));
    row.wall_ms = 12.5 * (i + 1);
    r.rows.push_back(row);
    pts.emplace_back(row.tau, row.err_total);
  }
  r.fit = fit_rate(pts);
  return r;
}

}  // namespace

TEST_CASE("empty ladder gives a header-only CSV") {
  ConvergenceReport r;
  CHECK(report_csv(r) == std::string(kCsvHeader) + "\n");
  const auto dir = scratch("empty");
  emit_report(r, dir);
  CHECK(slurp(dir / "convergence.csv") == std::string(kCsvHeader) + "\n");
  CHECK_FALSE(fs::exists(dir / "convergence.svg"));
}

TEST_CASE("six rows: six CSV lines, six markers, one fit line") {
  const auto r = six_rows();
  const auto csv = report_csv(r);
  CHECK(count(csv, "\n") == 7);
  CHECK(csv.rfind(kCsvHeader, 0) == 0);
  const auto svg = report_svg(r);
  CHECK(count(svg, "class=\"marker") == 6);
  CHECK(count(svg, "class=\"fit\"") == 1);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("href") == std::string::npos);  // no external assets

  const auto dir = scratch("six");
  emit_report(r, dir, {.svg = true});
  CHECK(fs::exists(dir / "convergence.svg"));
}

TEST_CASE("CSV values use 17 significant digits and a fixed wall time") {
  const auto r = six_rows();
  const auto csv = report_csv(r);
  std::istringstream in(csv);
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  CHECK(line.find("0.0078125,0.015625,0.0078125,0.0234375,") == 0);
  CHECK(line.find(",64,0,ok") != std::string::npos);
  auto timed = r;
  timed.record_wall_time = true;
  CHECK(report_csv(timed).find(",64,12.5,ok") != std::string::npos);
  auto odd = r;
  odd.rows[0].err_total = 1.0 / 3.0;
  CHECK(report_csv(odd).find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("re-emission is byte-identical") {
  const auto r = six_rows();
  const auto a = scratch("re_a");
  const auto b = scratch("re_b");
  emit_report(r, a, {.svg = true});
  emit_report(r, b, {.svg = true});
  CHECK(slurp(a / "convergence.csv") == slurp(b / "convergence.csv"));
  CHECK(slurp(a / "convergence.svg") == slurp(b / "convergence.svg"));
}

TEST_CASE("non-finite rows are flagged in the plot") {
  auto r = six_rows();
  r.rows[2].err_total = std::numeric_limits<double>::quiet_NaN();
  r.rows[2].status = "blowup";
  const auto svg = report_svg(r);
  CHECK(count(svg, "marker flagged") == 1);
  CHECK(report_csv(r).find("nan") != std::string::npos);
}

TEST_CASE("unwritable destination") {
  const auto dir = scratch("blocked");
  write_text(dir / "file", "x");
  CHECK_THROWS_AS(emit_report(six_rows(), dir / "file" / "sub"), Error);
}

TEST_CASE("defaults are complete and typed") {
  const Json d = default_config();
  for (const char* s : {"grid", "scheme", "data", "run", "study", "diagnostics", "synth"}) {
    CHECK(d.contains(s));
  }
  const auto g = grid_from(d);
  CHECK(g.dim == 1);
  CHECK(g.n_per_axis == 1024);
  CHECK(g.period == 20.0);
  const auto p = scheme_from(d);
  CHECK(p.tau == 0.0078125);
  CHECK(p.t_end == 0.5);
  const auto st = study_from(d);
  CHECK(st.taus.size() == 6);
  CHECK(st.taus.front() == doctest::Approx(0.5 / 64));
  CHECK(st.taus.back() == doctest::Approx(0.5 / 2048));
}

TEST_CASE("overrides are typed by the defaults") {
  Json c = default_config();
  apply_override(c, "grid.n_per_axis=512");
  CHECK(c["grid"]["n_per_axis"] == 512);
  apply_override(c, "scheme.tau=1");  // integer literal into a float slot
  CHECK(c["scheme"]["tau"].is_number_float());
  apply_override(c, "data.source=geodesic-rough");
  CHECK(c["data"]["source"] == "geodesic-rough");
  apply_override(c, "study.taus=[0.01,0.005]");
  CHECK(c["study"]["taus"].size() == 2);
  apply_override(c, "study.svg=false");
  CHECK(c["study"]["svg"] == false);

  CHECK_THROWS_AS(apply_override(c, "grid.n_per_axis=abc"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "grid.n_per_axis=1.5"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "grid.bogus=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "nosuch.key=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "grid=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "grid.dim"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "study.svg=1"), ConfigError);
}

TEST_CASE("environment overrides") {
  Json c = default_config();
  std::string a = "WMSOLVE_GRID__N_PER_AXIS=256";
  std::string b = "WMSOLVE_SCHEME__FILTER_CONSTANT=2.5";
  std::string other = "PATH=/usr/bin";
  char* env[] = {a.data(), other.data(), b.data(), nullptr};
  apply_environment(c, env);
  CHECK(c["grid"]["n_per_axis"] == 256);
  CHECK(c["scheme"]["filter_constant"] == 2.5);

  std::string bad = "WMSOLVE_GRIDN=3";
  char* env2[] = {bad.data(), nullptr};
  CHECK_THROWS_AS(apply_environment(c, env2), ConfigError);
  std::string unknown = "WMSOLVE_GRID__COLOR=3";
  char* env3[] = {unknown.data(), nullptr};
  CHECK_THROWS_AS(apply_environment(c, env3), ConfigError);
  apply_environment(c, nullptr);
}

TEST_CASE("config files: partial merge, unknown keys, manifests") {
  const auto dir = scratch("cfg");
  write_text(dir / "ok.json", R"({"grid": {"n_per_axis": 128}, "scheme": {"tau": 0.01}})");
  const Json c = load_config(dir / "ok.json");
  CHECK(c["grid"]["n_per_axis"] == 128);
  CHECK(c["grid"]["period"] == 20.0);
  CHECK(c["scheme"]["tau"] == 0.01);

  write_text(dir / "unknown.json", R"({"grid": {"size": 128}})");
  CHECK_THROWS_AS(load_config(dir / "unknown.json"), ConfigError);
  write_text(dir / "section.json", R"({"extras": {}})");
  CHECK_THROWS_AS(load_config(dir / "section.json"), ConfigError);
  write_text(dir / "typed.json", R"({"grid": {"n_per_axis": "many"}})");
  CHECK_THROWS_AS(load_config(dir / "typed.json"), ConfigError);
  write_text(dir / "broken.json", "{ not json");
  CHECK_THROWS_AS(load_config(dir / "broken.json"), ConfigError);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);

  Json manifest;
  manifest["status"] = "ok";
  manifest["config"] = c;
  write_text(dir / "manifest.json", manifest.dump(2));
  CHECK(load_config(dir / "manifest.json") == c);
}

TEST_CASE("semantic validation surfaces as config errors") {
  Json c = default_config();
  apply_override(c, "study.taus=[0.01,0.02]");
  CHECK_THROWS_AS(study_from(c), ConfigError);
  c = default_config();
  apply_override(c, "grid.dim=4");
  CHECK_THROWS_AS(grid_from(c), ConfigError);
  c = default_config();
  apply_override(c, "data.source=plaid");
  CHECK_THROWS_AS(data_from(c), ConfigError);
  c = default_config();
  apply_override(c, "run.steps=10");
  CHECK(scheme_from(c).t_end == doctest::Approx(10 * 0.0078125));
}

TEST_CASE("diagnostics config") {
  Json c = default_config();
  const auto d = diagnostics_from(c);
  CHECK(d.vanishing_trials == 20);
  CHECK(d.strichartz_pairs.size() == 2);
  apply_override(c, "diagnostics.tol_parseval=-1");
  CHECK(diagnostics_from(c).tol_parseval == -1.0);
}
