#include "wavemaps/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <iostream>
#include <limits>

#include "wavemaps/snapshot.hpp"

namespace wm {

std::string to_string(DataSource d) {
  switch (d) {
    case DataSource::geodesic_smooth: return "geodesic-smooth";
    case DataSource::geodesic_rough: return "geodesic-rough";
    case DataSource::fig1_1d: return "fig1-1d";
    case DataSource::custom_file: return "custom-file";
    case DataSource::constant_map: return "constant-map";
  }
  return "?";
}

std::string to_string(Reference r) {
  switch (r) {
    case Reference::exact: return "exact";
    case Reference::finest_tau: return "finest-tau";
    case Reference::rk4_oracle: return "rk4-oracle";
  }
  return "?";
}

DataSource data_source_from_string(const std::string& s) {
  for (auto d : {DataSource::geodesic_smooth, DataSource::geodesic_rough,
                 DataSource::fig1_1d, DataSource::custom_file, DataSource::constant_map}) {
    if (to_string(d) == s) return d;
  }
  throw ValidationError("unknown data source '" + s + "'");
}

Reference reference_from_string(const std::string& s) {
  for (auto r : {Reference::exact, Reference::finest_tau, Reference::rk4_oracle}) {
    if (to_string(r) == s) return r;
  }
  throw ValidationError("unknown reference '" + s + "'");
}

std::string version_string() { return "wavemaps 0.1.0"; }

std::optional<GeodesicData> geodesic_data(const DataSpec& d, const GridSpec& grid) {
  switch (d.source) {
    case DataSource::geodesic_smooth:
      return gaussian_geodesic(grid, d.amplitude, d.width);
    case DataSource::geodesic_rough:
      return GeodesicData{rough_theta0(grid, d.s, d.seed, d.random_phases), ScalarField(grid)};
    default:
      return std::nullopt;
  }
}

StatePair initial_state(const DataSpec& d, const GridSpec& grid) {
  grid.validate();
  if (auto g = geodesic_data(d, grid)) return geodesic_state(*g, 0.0);
  switch (d.source) {
    case DataSource::fig1_1d:
      return fig1_initial_data(grid);
    case DataSource::constant_map:
      return constant_map(grid, d.point);
    case DataSource::custom_file: {
      const Snapshot snap = read_snapshot(d.path);
      if (!(snap.grid == grid)) {
        throw ValidationError("custom file grid does not match the configured grid");
      }
      PhysicalField u;
      PhysicalField v;
      for (std::size_t a = 0; a < 3; ++a) {
        u[a] = column(snap, "u" + std::to_string(a + 1));
        v[a] = column(snap, "v" + std::to_string(a + 1));
      }
      StatePair s{to_spectral(u, grid), to_spectral(v, grid), 0.0};
      const double defect = tangency_defect(s);
      if (defect > 1e-8) {
        std::cerr << "warning: custom data not tangent, max |u.v| = " << defect << "\n";
      }
      return s;
    }
    default:
      break;
  }
  throw ValidationError("no generator for data source " + to_string(d.source));
}

std::optional<StatePair> exact_state(const DataSpec& d, const GridSpec& grid, double t) {
  if (auto g = geodesic_data(d, grid)) return geodesic_state(*g, t);
  if (d.source == DataSource::constant_map) {
    StatePair s = constant_map(grid, d.point);
    s.time = t;
    return s;
  }
  return std::nullopt;
}

SchemeParams StudyConfig::scheme(double tau) const {
  SchemeParams p;
  p.tau = tau;
  p.t_end = t_final;
  p.filter_constant = filter_constant;
  p.activation_steps = activation_steps;
  p.grid = grid;
  p.filter_mode = filter_mode;
  p.null_form_scale = null_form_scale;
  return p;
}

void StudyConfig::validate() const {
  grid.validate();
  if (!std::isfinite(s1)) throw ValidationError("s1 must be finite");
  if (threads == 0) throw ValidationError("threads must be >= 1");
  for (std::size_t i = 1; i < taus.size(); ++i) {
    if (!(taus[i] < taus[i - 1])) throw ValidationError("tau ladder must be strictly decreasing");
  }
  for (double t : taus) scheme(t).validate();
  if (reference == Reference::exact && data.source != DataSource::geodesic_smooth &&
      data.source != DataSource::geodesic_rough && data.source != DataSource::constant_map) {
    throw ValidationError("no exact solution for data source " + to_string(data.source));
  }
  if (reference == Reference::rk4_oracle && oracle_refinement < 16) {
    throw ValidationError("oracle_refinement must be >= 16");
  }
}

FitResult fit_rate(const std::vector<std::pair<double, double>>& pairs) {
  FitResult fit;
  std::vector<std::pair<double, double>> pts;
  for (const auto& [tau, err] : pairs) {
    if (!(err > 0.0) || !std::isfinite(err) || !(tau > 0.0)) {
      fit.warnings.push_back("excluded tau=" + format_double(tau) +
                             " with error " + format_double(err));
      continue;
    }
    pts.emplace_back(std::log2(tau), std::log2(err));
  }
  if (pts.size() < 2) throw ValidationError("fit_rate needs at least two positive errors");
  const double n = static_cast<double>(pts.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("fit_rate needs at least two distinct tau");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (const auto& [x, y] : pts) {
    fit.residual = std::max(fit.residual, std::abs(y - (fit.intercept + fit.slope * x)));
  }
  fit.used = pts.size();
  return fit;
}

std::pair<double, double> state_error(const StatePair& a, const StatePair& b, double s1) {
  return {sobolev_norm(a.u - b.u, s1), sobolev_norm(a.v - b.v, s1 - 1.0)};
}

double rk4_max_step(const GridSpec& grid, double filter_tau, double filter_constant) {
  auto lat = lattice(grid);
  double kmax = 0.0;
  for (const auto& p : lat->points) {
    if (filter_symbol(p.norm, filter_tau, filter_constant) > 0.0) kmax = std::max(kmax, p.norm);
  }
  // RK4 covers the imaginary axis up to 2 sqrt(2); keep a small margin.
  return kmax > 0.0 ? 2.8 / kmax : std::numeric_limits<double>::infinity();
}

namespace {

struct Rhs {
  const OracleParams& p;
  GridSpec grid;

  std::pair<Field, Field> operator()(const Field& u, const Field& v) const {
    Field du = v;
    Field dv;
    for (std::size_t a = 0; a < 3; ++a) dv[a] = laplacian(u[a]);
    if (!p.nonlinear) return {du, dv};
    const Field pu = filter_pi(u, p.filter_tau, p.filter_constant);
    const Field pv = filter_pi(v, p.filter_tau, p.filter_constant);
    const auto xu = to_physical(pu);
    const auto xv = to_physical(pv);
    auto weight = dot(xv, xv);
    for (int axis = 0; axis < grid.dim; ++axis) {
      Field g;
      for (std::size_t a = 0; a < 3; ++a) g[a] = derivative(pu[a], axis);
      const auto xg = to_physical(g);
      const auto gg = dot(xg, xg);
      for (std::size_t x = 0; x < weight.size(); ++x) weight[x] -= gg[x];
    }
    PhysicalField nl;
    for (std::size_t a = 0; a < 3; ++a) {
      nl[a].resize(weight.size());
      for (std::size_t x = 0; x < weight.size(); ++x) nl[a][x] = -xu[a][x] * weight[x];
    }
    dv += filter_pi(to_spectral(nl, grid), p.filter_tau, p.filter_constant);
    return {du, dv};
  }
};

}  // namespace

StatePair rk4_oracle(const StatePair& s0, const OracleParams& p) {
  const GridSpec& grid = s0.grid();
  if (!(p.tau_fine > 0.0) || !(p.t_final >= 0.0) || !std::isfinite(p.t_final)) {
    throw ValidationError("rk4_oracle: need tau_fine > 0 and finite t_final >= 0");
  }
  const double ratio = p.t_final / p.tau_fine;
  auto steps = static_cast<std::size_t>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-9 * std::max(1.0, ratio)) {
    steps = static_cast<std::size_t>(std::ceil(ratio));
  }
  const double h = steps > 0 ? p.t_final / static_cast<double>(steps) : 0.0;
  const double hmax = rk4_max_step(grid, p.filter_tau, p.filter_constant);
  if (h > hmax) {
    throw ValidationError("rk4_oracle: tau_fine " + format_double(h) +
                          " is unstable; need tau_fine <= " + format_double(hmax));
  }
  const Rhs f{p, grid};
  Field u = filter_pi(s0.u, p.filter_tau, p.filter_constant);
  Field v = filter_pi(s0.v, p.filter_tau, p.filter_constant);
  for (std::size_t n = 0; n < steps; ++n) {
    const auto [k1u, k1v] = f(u, v);
    const auto [k2u, k2v] = f(u + (0.5 * h) * k1u, v + (0.5 * h) * k1v);
    const auto [k3u, k3v] = f(u + (0.5 * h) * k2u, v + (0.5 * h) * k2v);
    const auto [k4u, k4v] = f(u + h * k3u, v + h * k3v);
    u += (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  return {u, v, s0.time + p.t_final};
}

namespace {

struct Job {
  StudyRow row;
  std::optional<StatePair> final_state;
};

Job run_one(const StudyConfig& c, double tau, const StatePair& s0) {
  Job job;
  job.row.tau = tau;
  const SchemeParams p = c.scheme(tau);
  const auto census = filter_census(c.grid, tau, c.filter_constant);
  job.row.attenuated = census.attenuated;
  job.row.annihilated = census.annihilated;
  const auto start = std::chrono::steady_clock::now();
  try {
    Trajectory traj = evolve(s0, p);
    job.row.steps = traj.steps;
    job.row.sphere_dev = sphere_deviation(traj.final_state);
    job.final_state = std::move(traj.final_state);
  } catch (const BlowUpError& e) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    job.row.status = "blowup";
    job.row.steps = e.step();
    job.row.err_u = job.row.err_v = job.row.err_total = job.row.sphere_dev = nan;
  }
  const auto stop = std::chrono::steady_clock::now();
  job.row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  return job;
}

void run_oracle(const StudyConfig& c, const StatePair& s0, Job& job) {
  if (!job.final_state) return;
  OracleParams op;
  op.tau_fine = c.taus.back() / c.oracle_refinement;
  op.t_final = c.t_final;
  op.filter_constant = c.filter_constant;
  op.filter_tau = job.row.tau;
  const StatePair ref = rk4_oracle(s0, op);
  const auto [eu, ev] = state_error(*job.final_state, ref, c.s1);
  job.row.err_u = eu;
  job.row.err_v = ev;
  job.row.err_total = eu + ev;
}

}  // namespace

ConvergenceReport run_study(const StudyConfig& c) {
  c.validate();
  ConvergenceReport rep;
  rep.version = version_string();
  rep.record_wall_time = c.record_wall_time;
  if (c.taus.empty()) return rep;

  const StatePair s0 = initial_state(c.data, c.grid);
  std::optional<StatePair> exact;
  if (c.reference == Reference::exact) exact = exact_state(c.data, c.grid, c.t_final);

  std::vector<Job> jobs(c.taus.size());
  auto work = [&](std::size_t i) {
    Job job = run_one(c, c.taus[i], s0);
    if (c.reference == Reference::rk4_oracle) run_oracle(c, s0, job);
    return job;
  };
  const std::size_t width = std::max<unsigned>(1, c.threads);
  for (std::size_t begin = 0; begin < jobs.size(); begin += width) {
    const std::size_t end = std::min(jobs.size(), begin + width);
    if (width == 1) {
      jobs[begin] = work(begin);
      continue;
    }
    std::vector<std::future<Job>> pending;
    for (std::size_t i = begin; i < end; ++i) {
      pending.push_back(std::async(std::launch::async, work, i));
    }
    for (std::size_t i = begin; i < end; ++i) jobs[i] = pending[i - begin].get();
  }

  if (c.reference == Reference::exact) {
    for (auto& job : jobs) {
      if (!job.final_state) continue;
      const auto [eu, ev] = state_error(*job.final_state, *exact, c.s1);
      job.row.err_u = eu;
      job.row.err_v = ev;
      job.row.err_total = eu + ev;
    }
  } else if (c.reference == Reference::finest_tau) {
    auto& finest = jobs.back();
    if (!finest.final_state) {
      throw BlowUpError(finest.row.steps, "finest-tau reference run blew up");
    }
    for (auto& job : jobs) {
      if (!job.final_state) continue;
      const auto [eu, ev] = state_error(*job.final_state, *finest.final_state, c.s1);
      job.row.err_u = eu;
      job.row.err_v = ev;
      job.row.err_total = eu + ev;
    }
    finest.row.status = "reference";
  }

  std::vector<std::pair<double, double>> pairs;
  for (auto& job : jobs) {
    if (job.row.status == "ok") pairs.emplace_back(job.row.tau, job.row.err_total);
    rep.rows.push_back(job.row);
  }
  std::size_t usable = 0;
  for (const auto& pr : pairs) usable += pr.second > 0.0 && std::isfinite(pr.second);
  if (usable >= 2) rep.fit = fit_rate(pairs);
  return rep;
}

}  // namespace wm
