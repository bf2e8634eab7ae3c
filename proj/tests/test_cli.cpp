#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wavemaps/config.hpp"
#include "wavemaps/snapshot.hpp"

namespace fs = std::filesystem;
using wm::Json;

namespace {

struct Outcome {
  int code = -1;
  std::string output;
};

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("wavemaps_cli_" + name);
  fs::remove_all(p);
  return p;
}

Outcome wmsolve(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + WMSOLVE_PATH + " " + args + " 2>&1";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) o.output += buf;
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string preset(const std::string& name) {
  return std::string("--config ") + PRESETS_DIR + "/" + name + ".json";
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Json manifest(const fs::path& dir) { return Json::parse(slurp(dir / "manifest.json")); }

double fitted_rate(const fs::path& dir) {
  std::ifstream f(dir / "fit.csv");
  std::string header, line;
  std::getline(f, header);
  std::getline(f, line);
  REQUIRE(header == "rate,residual,used");
  return std::stod(line.substr(0, line.find(',')));
}

}  // namespace

TEST_CASE("help and bad flags") {
  CHECK(wmsolve("--help").code == 0);
  CHECK(wmsolve("--help").output.find("WMSOLVE_") != std::string::npos);
  CHECK(wmsolve("run --no-such-flag").code == 2);
  CHECK(wmsolve("").code == 2);
}

TEST_CASE("run: figure preset for ten steps") {
  const auto out = scratch("fig1");
  const auto r = wmsolve("run " + preset("fig1-1d") + " --set run.steps=10 --out " + out.string());
  INFO(r.output);
  REQUIRE(r.code == 0);
  const auto m = manifest(out);
  CHECK(m["command"] == "run");
  CHECK(m["results"]["steps"] == 10);
  CHECK(m["results"]["status"] == "ok");
  CHECK(fs::exists(out / "final_state.csv"));
  const auto snap = wm::read_snapshot(out / "final_state.csv");
  CHECK(snap.time == doctest::Approx(10 * 0.0078125));
}

TEST_CASE("run: constant map is unchanged") {
  const auto out = scratch("const");
  const auto r = wmsolve("run " + preset("constant-map") + " --out " + out.string());
  INFO(r.output);
  REQUIRE(r.code == 0);
  const auto snap = wm::read_snapshot(out / "final_state.csv");
  const double p[3] = {0.0, 0.6, 0.8};
  const char* names[3] = {"u1", "u2", "u3"};
  for (int a = 0; a < 3; ++a) {
    for (double x : wm::column(snap, names[a])) CHECK(std::abs(x - p[a]) < 1e-12);
    for (double x : wm::column(snap, std::string("v") + char('1' + a))) CHECK(std::abs(x) < 1e-12);
  }
}

TEST_CASE("run: sphere deviation drops when tau halves") {
  const auto a = scratch("dev_a");
  const auto b = scratch("dev_b");
  REQUIRE(wmsolve("run " + preset("smooth-geodesic") + " --set scheme.tau=0.0078125 --out " +
                  a.string()).code == 0);
  REQUIRE(wmsolve("run " + preset("smooth-geodesic") + " --set scheme.tau=0.00390625 --out " +
                  b.string()).code == 0);
  const double da = manifest(a)["results"]["sphere_dev"].get<double>();
  const double db = manifest(b)["results"]["sphere_dev"].get<double>();
  CHECK(db < da);
  CHECK(manifest(b)["results"].contains("error_l2_hm1"));
}

TEST_CASE("run: blow-up exits 1") {
  const auto out = scratch("blow");
  const auto r = wmsolve("run " + preset("smooth-geodesic") +
                         " --set scheme.null_form_scale=1e150 --set data.amplitude=2.0"
                         " --set data.width=0.5 --out " + out.string());
  CHECK(r.code == 1);
  CHECK(manifest(out)["results"]["status"] == "blowup");
}

TEST_CASE("convergence: smooth and rough presets") {
  const auto s = scratch("conv_smooth");
  const auto rs = wmsolve("convergence " + preset("smooth-geodesic") + " --threads 4 --out " + s.string());
  INFO(rs.output);
  REQUIRE(rs.code == 0);
  const double rate = fitted_rate(s);
  CHECK(rate >= 0.8);
  CHECK(rate <= 1.2);
  CHECK(fs::exists(s / "convergence.csv"));
  CHECK(fs::exists(s / "convergence.svg"));
  CHECK(manifest(s)["results"]["rows"].size() == 6);

  const auto r = scratch("conv_rough");
  const auto rr = wmsolve("convergence " + preset("rough-1.7") + " --threads 4 --out " + r.string());
  INFO(rr.output);
  REQUIRE(rr.code == 0);
  CHECK(fitted_rate(r) >= 0.05);

  // Replaying the manifest reproduces the CSV byte for byte.
  const auto replay = scratch("conv_replay");
  REQUIRE(wmsolve("convergence --config " + (s / "manifest.json").string() + " --out " +
                  replay.string()).code == 0);
  CHECK(slurp(replay / "convergence.csv") == slurp(s / "convergence.csv"));
}

TEST_CASE("configuration errors exit 2") {
  const auto out = scratch("cfgerr");
  CHECK(wmsolve("convergence " + preset("smooth-geodesic") + " --set study.taus=[0.3] --out " +
                out.string()).code == 2);
  CHECK(wmsolve("run --set grid.colour=3 --out " + out.string()).code == 2);
  CHECK(wmsolve("run --set grid.n_per_axis=big --out " + out.string()).code == 2);
  CHECK(wmsolve("run --config /nonexistent.json --out " + out.string()).code == 2);
  CHECK(wmsolve("run --out " + out.string(), "WMSOLVE_GRID__N_PER_AXIS=abc").code == 2);
  CHECK(wmsolve("run --set scheme.tau=0.3 --out " + out.string()).code == 2);
}

TEST_CASE("environment override reaches the run") {
  const auto out = scratch("env");
  REQUIRE(wmsolve("run " + preset("constant-map") + " --out " + out.string(),
                  "WMSOLVE_GRID__N_PER_AXIS=256").code == 0);
  CHECK(manifest(out)["config"]["grid"]["n_per_axis"] == 256);
  // --set wins over the environment.
  REQUIRE(wmsolve("run " + preset("constant-map") + " --set grid.n_per_axis=512 --out " +
                  out.string(), "WMSOLVE_GRID__N_PER_AXIS=256").code == 0);
  CHECK(manifest(out)["config"]["grid"]["n_per_axis"] == 512);
}

TEST_CASE("diagnostics: identities, controls and a forced failure") {
  const auto out = scratch("diag");
  const auto ok = wmsolve("diagnostics --set diagnostics.suites=[\\\"identities\\\"] --out " + out.string());
  INFO(ok.output);
  CHECK(ok.code == 0);
  CHECK(slurp(out / "diagnostics.csv").rfind("suite,check,value,tolerance,status\n", 0) == 0);

  const auto ctl = wmsolve("diagnostics --set diagnostics.suites=[\\\"vanishing\\\"]"
                           " --set diagnostics.vanishing_cases=[\\\"geom4\\\"]"
                           " --set diagnostics.vanishing_trials=2 --set diagnostics.control_trials=2"
                           " --seed 7 --out " + out.string());
  INFO(ctl.output);
  CHECK(ctl.code == 0);
  const auto csv = slurp(out / "diagnostics.csv");
  CHECK(csv.find("vanishing,geom4_control,") != std::string::npos);
  CHECK(csv.find(",expected-fail\n") != std::string::npos);
  CHECK(manifest(out)["config"]["diagnostics"]["seed"] == 7);

  const auto bad = wmsolve("diagnostics --set diagnostics.suites=[\\\"identities\\\"]"
                           " --set diagnostics.tol_parseval=-1 --out " + out.string());
  CHECK(bad.code == 1);
  CHECK(bad.output.find("FAILED identities/parseval") != std::string::npos);
}

TEST_CASE("synth: rough spectrum, figure data, determinism") {
  const auto a = scratch("synth_a");
  const auto rough = std::string("synth --set data.source=geodesic-rough --set data.s=1.7"
                                 " --set grid.n_per_axis=128 --out ");
  REQUIRE(wmsolve(rough + a.string()).code == 0);
  std::ifstream spec(a / "theta0_spectrum.csv");
  std::string header, first;
  std::getline(spec, header);
  std::getline(spec, first);
  CHECK(header == "index,m1,m2,m3,k_norm,re,im");
  std::vector<std::string> cells;
  std::stringstream ss(first);
  for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
  REQUIRE(cells.size() == 7);
  CHECK(cells[0] == "0");
  CHECK(std::stod(cells[5]) == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-15));

  const auto b = scratch("synth_b");
  REQUIRE(wmsolve(rough + b.string()).code == 0);
  CHECK(slurp(a / "theta0_spectrum.csv") == slurp(b / "theta0_spectrum.csv"));
  CHECK(slurp(a / "initial_state.csv") == slurp(b / "initial_state.csv"));

  const auto f = scratch("synth_fig1");
  REQUIRE(wmsolve("synth " + preset("fig1-1d") + " --out " + f.string()).code == 0);
  const auto snap = wm::read_snapshot(f / "initial_state.csv");
  const auto& u1 = wm::column(snap, "u1");
  const auto& u2 = wm::column(snap, "u2");
  const auto& u3 = wm::column(snap, "u3");
  for (std::size_t i = 0; i < u1.size(); ++i) {
    CHECK(std::abs(std::sqrt(u1[i] * u1[i] + u2[i] * u2[i] + u3[i] * u3[i]) - 1.0) < 1e-12);
  }
}
