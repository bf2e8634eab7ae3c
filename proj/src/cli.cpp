#include "wavemaps/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "wavemaps/diagnostics.hpp"
#include "wavemaps/report.hpp"
#include "wavemaps/snapshot.hpp"

namespace wm {

namespace fs = std::filesystem;

namespace {

void prepare(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error("cannot create " + out.string() + ": " + ec.message());
}

Json manifest(const std::string& command, const Json& cfg) {
  Json m;
  m["tool"] = version_string();
  m["command"] = command;
  m["config"] = cfg;
  return m;
}

void write_manifest(const fs::path& out, const Json& m) {
  write_text(out / "manifest.json", m.dump(2) + "\n");
}

// JSON has no NaN; non-finite numbers are stored as strings.
Json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

Json census_json(const FilterCensus& c) {
  return {{"retained", c.retained}, {"attenuated", c.attenuated},
          {"annihilated", c.annihilated}};
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

Json resolve_config(const CommandConfig& cc, char** env) {
  Json cfg = cc.config_path.empty() ? default_config() : load_config(cc.config_path);
  apply_environment(cfg, env);
  for (const auto& o : cc.overrides) apply_override(cfg, o);
  if (cc.threads) {
    if (*cc.threads == 0) throw ConfigError("--threads must be >= 1");
    cfg["study"]["threads"] = *cc.threads;
  }
  if (cc.seed) {
    cfg["data"]["seed"] = *cc.seed;
    cfg["diagnostics"]["seed"] = *cc.seed;
  }
  return cfg;
}

int cmd_run(const Json& cfg, const fs::path& out, std::ostream& log) {
  const SchemeParams p = scheme_from(cfg);
  const DataSpec data = data_from(cfg);
  const auto every = cfg["run"]["snapshot_every"].get<long long>();
  const auto dev_every = cfg["run"]["deviation_every"].get<long long>();
  if (every < 0 || dev_every < 0) throw ConfigError("run.*_every must be >= 0");
  StatePair s0 = [&] {
    try {
      return initial_state(data, p.grid);
    } catch (const ValidationError& e) {
      throw ConfigError(e.what());
    }
  }();
  prepare(out);

  Json series = Json::array();
  EvolveOptions opts;
  opts.snapshot_every = static_cast<std::size_t>(every);
  if (dev_every > 0) {
    opts.observers.push_back([&](std::size_t n, const StatePair& s) {
      if (n % static_cast<std::size_t>(dev_every) == 0 || n == p.steps()) {
        series.push_back({{"step", n}, {"time", s.time}, {"sphere_dev", sphere_deviation(s)}});
      }
    });
  }

  Json m = manifest("run", cfg);
  Json& res = m["results"];
  res["scheme"] = {{"tau", p.tau}, {"t_end", p.t_end}, {"steps", p.steps()},
                   {"filter_constant", p.filter_constant},
                   {"activation_steps", p.activation_steps},
                   {"filter_mode", to_string(p.filter_mode)},
                   {"null_form_scale", p.null_form_scale}};
  res["census"] = census_json(filter_census(p.grid, p.tau, p.filter_constant));
  const auto start = std::chrono::steady_clock::now();
  try {
    Trajectory traj = evolve(s0, p, opts);
    res["wall_ms"] = elapsed_ms(start);
    res["status"] = "ok";
    res["steps"] = traj.steps;
    res["final_time"] = traj.final_state.time;
    res["sphere_dev"] = sphere_deviation(traj.final_state);
    if (auto exact = exact_state(data, p.grid, traj.final_state.time)) {
      const auto [eu, ev] = state_error(traj.final_state, *exact, 0.0);
      res["error_l2_hm1"] = {{"u", eu}, {"v", ev}, {"total", eu + ev}};
    }
    res["deviation_series"] = series;
    if (!traj.snapshots.empty()) {
      prepare(out / "snapshots");
      Json files = Json::array();
      for (const auto& s : traj.snapshots) {
        char name[64];
        std::snprintf(name, sizeof name, "step_%06lld.csv",
                      std::llround(s.time / p.tau));
        write_snapshot(out / "snapshots" / name, snapshot_of(s.u, s.v, s.time));
        files.push_back(std::string("snapshots/") + name);
      }
      res["snapshots"] = files;
    }
    write_snapshot(out / "final_state.csv",
                   snapshot_of(traj.final_state.u, traj.final_state.v, traj.final_state.time));
    res["final_state"] = "final_state.csv";
    write_manifest(out, m);
    log << "run: " << traj.steps << " steps, sphere_dev "
        << format_double(res["sphere_dev"].get<double>()) << "\n";
    return kExitOk;
  } catch (const BlowUpError& e) {
    res["wall_ms"] = elapsed_ms(start);
    res["status"] = "blowup";
    res["steps"] = e.step();
    res["deviation_series"] = series;
    write_manifest(out, m);
    log << "run: blow-up at step " << e.step() << "\n";
    return kExitFailure;
  }
}

int cmd_convergence(const Json& cfg, const fs::path& out, std::ostream& log) {
  const StudyConfig c = study_from(cfg);
  // Custom files are read here so a missing file is a configuration error.
  try {
    (void)initial_state(c.data, c.grid);
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  prepare(out);
  const auto start = std::chrono::steady_clock::now();
  ConvergenceReport rep = run_study(c);
  rep.config_echo = cfg.dump();
  emit_report(rep, out, {cfg["study"]["svg"].get<bool>()});

  std::string fit_csv = "rate,residual,used\n";
  Json m = manifest("convergence", cfg);
  Json& res = m["results"];
  res["version"] = rep.version;
  res["wall_ms"] = elapsed_ms(start);
  if (rep.fit) {
    res["fit"] = {{"rate", rep.fit->slope}, {"intercept", rep.fit->intercept},
                  {"residual", rep.fit->residual}, {"used", rep.fit->used},
                  {"warnings", rep.fit->warnings}};
    fit_csv += format_double(rep.fit->slope) + "," + format_double(rep.fit->residual) + "," +
               std::to_string(rep.fit->used) + "\n";
  } else {
    res["fit"] = nullptr;
  }
  write_text(out / "fit.csv", fit_csv);
  bool blowup = false;
  Json rows = Json::array();
  for (const auto& r : rep.rows) {
    blowup = blowup || r.status == "blowup";
    rows.push_back({{"tau", r.tau}, {"err_total", number(r.err_total)},
                    {"steps", r.steps}, {"status", r.status}, {"wall_ms", r.wall_ms},
                    {"attenuated", r.attenuated}, {"annihilated", r.annihilated}});
  }
  res["rows"] = rows;
  write_manifest(out, m);
  if (rep.fit) {
    log << "convergence: rate " << format_double(rep.fit->slope) << " residual "
        << format_double(rep.fit->residual) << "\n";
  } else {
    log << "convergence: no fit (fewer than two usable rows)\n";
  }
  return blowup ? kExitFailure : kExitOk;
}

int cmd_diagnostics(const Json& cfg, const fs::path& out, std::ostream& log) {
  const DiagnosticsConfig d = diagnostics_from(cfg);
  prepare(out);
  std::vector<CheckResult> results;
  for (const auto& suite : d.suites) {
    std::vector<CheckResult> part;
    if (suite == "identities") part = identity_suite(d);
    if (suite == "vanishing") part = vanishing_suite(d);
    if (suite == "strichartz") part = strichartz_suite(d);
    results.insert(results.end(), part.begin(), part.end());
  }
  std::string csv = "suite,check,value,tolerance,status\n";
  Json checks = Json::array();
  bool ok = true;
  for (const auto& r : results) {
    csv += r.suite + "," + r.name + "," + format_double(r.value) + "," +
           format_double(r.tolerance) + "," + r.status + "\n";
    checks.push_back({{"suite", r.suite}, {"check", r.name}, {"value", number(r.value)},
                      {"tolerance", number(r.tolerance)}, {"status", r.status}});
    if (!r.ok()) {
      ok = false;
      log << "FAILED " << r.suite << "/" << r.name << ": value " << format_double(r.value)
          << " tolerance " << format_double(r.tolerance) << " (" << r.status << ")\n";
    }
  }
  write_text(out / "diagnostics.csv", csv);
  Json m = manifest("diagnostics", cfg);
  m["results"] = {{"checks", checks}, {"ok", ok}};
  write_manifest(out, m);
  log << "diagnostics: " << results.size() << " checks, " << (ok ? "all ok" : "failures")
      << "\n";
  return ok ? kExitOk : kExitFailure;
}

int cmd_synth(const Json& cfg, const fs::path& out, std::ostream& log) {
  const GridSpec grid = grid_from(cfg);
  const DataSpec data = data_from(cfg);
  StatePair s0 = [&] {
    try {
      return initial_state(data, grid);
    } catch (const ValidationError& e) {
      throw ConfigError(e.what());
    }
  }();
  prepare(out);
  Json m = manifest("synth", cfg);
  Json& res = m["results"];
  res["generator"] = to_string(data.source);
  res["seed"] = data.seed;
  res["random_phases"] = data.random_phases;
  write_snapshot(out / "initial_state.csv", snapshot_of(s0.u, s0.v, 0.0));
  res["files"] = Json::array({"initial_state.csv"});
  res["sphere_dev"] = sphere_deviation(s0);
  res["tangency_defect"] = tangency_defect(s0);
  if (cfg["synth"]["theta_spectrum"].get<bool>()) {
    if (auto g = geodesic_data(data, grid)) {
      auto lat = lattice(grid);
      std::string csv = "index,m1,m2,m3,k_norm,re,im\n";
      const std::size_t n = grid.n_per_axis;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        std::size_t rest = i;
        long m3 = 0, m2 = 0, m1 = 0;
        if (grid.dim == 3) { m3 = grid.mode_index(rest % n); rest /= n; }
        if (grid.dim >= 2) { m2 = grid.mode_index(rest % n); rest /= n; }
        m1 = grid.mode_index(rest);
        const cplx c = g->theta0.coeffs[i];
        csv += std::to_string(i) + "," + std::to_string(m1) + "," + std::to_string(m2) + "," +
               std::to_string(m3) + "," + format_double(lat->points[i].norm) + "," +
               format_double(c.real()) + "," + format_double(c.imag()) + "\n";
      }
      write_text(out / "theta0_spectrum.csv", csv);
      res["files"].push_back("theta0_spectrum.csv");
    }
  }
  write_manifest(out, m);
  log << "synth: wrote " << res["files"].size() << " file(s) to " << out.string() << "\n";
  return kExitOk;
}

int run_command(const CommandConfig& cc, char** env, std::ostream& log, std::ostream& err) {
  try {
    const Json cfg = resolve_config(cc, env);
    if (cc.subcommand == "run") return cmd_run(cfg, cc.out_dir, log);
    if (cc.subcommand == "convergence") return cmd_convergence(cfg, cc.out_dir, log);
    if (cc.subcommand == "diagnostics") return cmd_diagnostics(cfg, cc.out_dir, log);
    if (cc.subcommand == "synth") return cmd_synth(cfg, cc.out_dir, log);
    err << "error: unknown subcommand '" << cc.subcommand << "'\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace wm
