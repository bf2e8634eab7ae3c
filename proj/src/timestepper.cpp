#include "wavemaps/timestepper.hpp"

#include <algorithm>
#include <cmath>

namespace wm {

std::string to_string(FilterMode m) {
  return m == FilterMode::literal ? "literal" : "output_only";
}

FilterMode filter_mode_from_string(const std::string& s) {
  if (s == "literal") return FilterMode::literal;
  if (s == "output_only") return FilterMode::output_only;
  throw ValidationError("unknown filter mode '" + s + "'");
}

void SchemeParams::validate() const {
  grid.validate();
  if (!(tau > 0.0 && tau < 1.0)) throw ValidationError("tau must lie in (0, 1)");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw ValidationError("t_end must be finite and >= 0");
  }
  const double ratio = t_end / tau;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
    throw ValidationError("t_end is not an integer multiple of tau");
  }
  if (!(filter_constant > 0.0)) throw ValidationError("filter_constant must be > 0");
  if (activation_steps < 2) {
    throw ValidationError("activation_steps must be >= 2 (Box_tau needs 3 levels)");
  }
  if (!std::isfinite(null_form_scale)) throw ValidationError("null_form_scale not finite");
  const double band = 1.0 / (filter_constant * std::sqrt(tau));
  const double limit = (2.0 / 3.0) * grid.nyquist();
  if (band > limit) {
    throw ValidationError("filter band " + std::to_string(band) +
                          " exceeds 2/3 of the Nyquist wavenumber (" +
                          std::to_string(limit) + ")");
  }
}

std::size_t SchemeParams::steps() const {
  return static_cast<std::size_t>(std::llround(t_end / tau));
}

History History::of(const Field& u_prev2, const Field& u_prev, const Field& u_now) {
  History h;
  h.push(u_prev2);
  h.push(u_prev);
  h.push(u_now);
  return h;
}

void History::push(const Field& u) {
  head_ = (head_ + 1) % 3;
  ring_[head_] = u;
  count_ = std::min<std::size_t>(count_ + 1, 3);
}

const Field& History::level(std::size_t age) const {
  if (age >= depth()) throw ValidationError("history: missing level");
  return ring_[(head_ + 3 - age) % 3];
}

PhysicalField to_physical(const Field& f) {
  return {to_physical(f[0]), to_physical(f[1]), to_physical(f[2])};
}

Field to_spectral(const PhysicalField& f, const GridSpec& grid) {
  Field out;
  for (std::size_t a = 0; a < 3; ++a) out[a] = to_spectral(std::span<const double>(f[a]), grid);
  return out;
}

std::vector<double> dot(const PhysicalField& a, const PhysicalField& b) {
  std::vector<double> out(a[0].size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = a[0][i] * b[0][i] + a[1][i] * b[1][i] + a[2][i] * b[2][i];
  }
  return out;
}

ScalarField box_tau(const ScalarField& now, const ScalarField& prev,
                    const ScalarField& prev2, double tau) {
  require_same_grid(now.grid, prev.grid, "box_tau");
  require_same_grid(now.grid, prev2.grid, "box_tau");
  auto lat = lattice(now.grid);
  ScalarField out(now.grid);
  const double inv = 1.0 / (tau * tau);
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
    const double k2 = lat->points[i].norm * lat->points[i].norm;
    out.coeffs[i] = (now.coeffs[i] - 2.0 * prev.coeffs[i] + prev2.coeffs[i]) * inv +
                    k2 * now.coeffs[i];
  }
  return out;
}

Field box_tau(const History& h, double tau) {
  if (!h.full()) throw ValidationError("box_tau: history needs three levels");
  Field out;
  for (std::size_t a = 0; a < 3; ++a) {
    out[a] = box_tau(h.now()[a], h.prev()[a], h.prev2()[a], tau);
  }
  return out;
}

Field finite_diff(const Field& u_k, const Field& u_km, int m, double tau) {
  if (m <= 0) throw ValidationError("finite_diff: m must be >= 1");
  Field out = u_k - u_km;
  out *= 1.0 / (static_cast<double>(m) * tau);
  return out;
}

std::vector<double> null_bracket(const History& g, const History& h, double tau) {
  if (!g.full() || !h.full()) {
    throw ValidationError("null_bracket: histories need three levels");
  }
  const GridSpec& grid = g.now().grid();
  require_same_grid(grid, h.now().grid(), "null_bracket");

  const bool same = &g == &h;
  std::array<PhysicalField, 3> pg;
  std::array<PhysicalField, 3> ph;
  const std::array<const Field*, 3> gl{&g.now(), &g.prev(), &g.prev2()};
  const std::array<const Field*, 3> hl{&h.now(), &h.prev(), &h.prev2()};
  for (std::size_t j = 0; j < 3; ++j) {
    pg[j] = to_physical(*gl[j]);
    ph[j] = same ? pg[j] : to_physical(*hl[j]);
  }

  std::array<ScalarField, 3> w;
  for (std::size_t j = 0; j < 3; ++j) {
    w[j] = to_spectral(std::span<const double>(dot(pg[j], ph[j])), grid);
  }
  auto out = to_physical(box_tau(w[0], w[1], w[2], tau));
  const auto box_h = to_physical(box_tau(h, tau));
  const auto box_g = same ? box_h : to_physical(box_tau(g, tau));
  const auto g_box_h = dot(pg[0], box_h);
  const auto h_box_g = dot(ph[0], box_g);
  for (std::size_t x = 0; x < out.size(); ++x) out[x] -= g_box_h[x] + h_box_g[x];
  return out;
}

std::vector<double> null_expansion(const History& g, const History& h, double tau) {
  if (!g.full() || !h.full()) {
    throw ValidationError("null_expansion: histories need three levels");
  }
  const GridSpec& grid = g.now().grid();
  require_same_grid(grid, h.now().grid(), "null_expansion");
  const auto dg_n = to_physical(finite_diff(g.now(), g.prev(), 1, tau));
  const auto dg_n1 = to_physical(finite_diff(g.prev(), g.prev2(), 1, tau));
  const auto dh_n1 = to_physical(finite_diff(h.prev(), h.prev2(), 1, tau));
  const auto d2h_n = to_physical(finite_diff(h.now(), h.prev2(), 2, tau));
  const auto a = dot(dg_n, dh_n1);
  const auto b = dot(dg_n, d2h_n);
  const auto c = dot(dg_n1, d2h_n);
  std::vector<double> grad(grid.size(), 0.0);
  for (int axis = 0; axis < grid.dim; ++axis) {
    Field gx;
    Field hx;
    for (std::size_t k = 0; k < 3; ++k) {
      gx[k] = derivative(g.now()[k], axis);
      hx[k] = derivative(h.now()[k], axis);
    }
    const auto term = dot(to_physical(gx), to_physical(hx));
    for (std::size_t x = 0; x < grad.size(); ++x) grad[x] += term[x];
  }
  std::vector<double> out(grid.size());
  for (std::size_t x = 0; x < out.size(); ++x) {
    out[x] = 2.0 * (a[x] - grad[x]) - 2.0 * b[x] + 2.0 * c[x];
  }
  return out;
}

Field trilinear_T(const Field& f, const History& g, const History& h, double tau) {
  const GridSpec& grid = f.grid();
  require_same_grid(grid, g.now().grid(), "trilinear_T");
  const auto bracket = null_bracket(g, h, tau);
  const auto pf = to_physical(f);
  PhysicalField out;
  for (std::size_t a = 0; a < 3; ++a) {
    out[a].resize(grid.size());
    for (std::size_t x = 0; x < grid.size(); ++x) out[a][x] = -pf[a][x] * bracket[x];
  }
  return to_spectral(out, grid);
}

Field nonlinearity_tau(const History& h, const SchemeParams& p) {
  if (!h.full()) throw ValidationError("nonlinearity_tau: history needs three levels");
  Field bracket;
  if (p.filter_mode == FilterMode::literal) {
    const History ph = h.map(
        [&](const Field& u) { return filter_pi(u, p.tau, p.filter_constant); });
    bracket = trilinear_T(ph.now(), ph, ph, p.tau);
  } else {
    bracket = trilinear_T(h.now(), h, h, p.tau);
  }
  Field out = filter_pi(bracket, p.tau, p.filter_constant);
  out *= p.null_form_scale;
  return out;
}

namespace {

bool finite_sample(const Field& f) {
  const std::size_t n = f.grid().size();
  const std::size_t stride = std::max<std::size_t>(1, n / 4096);
  for (const auto& comp : f.c) {
    for (std::size_t i = 0; i < n; i += stride) {
      const auto c = comp.coeffs[i];
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    }
  }
  return true;
}

}  // namespace

StatePair lie_step(const StatePair& s, const History& h, std::size_t n,
                   const SchemeParams& p) {
  const double expected = static_cast<double>(n) * p.tau;
  if (std::abs(s.time - expected) > 1e-9 * std::max(1.0, expected)) {
    throw ValidationError("lie_step: state time " + std::to_string(s.time) +
                          " inconsistent with step " + std::to_string(n));
  }
  if (n < static_cast<std::size_t>(p.activation_steps)) return free_evolution(s, p.tau);
  StatePair mid = s;
  Field inc = nonlinearity_tau(h, p);
  inc *= p.tau;
  mid.v += inc;
  return free_evolution(mid, p.tau);
}

Trajectory evolve(const StatePair& s0, const SchemeParams& p,
                  const EvolveOptions& opts) {
  p.validate();
  require_same_grid(s0.grid(), p.grid, "evolve");
  if (s0.time != 0.0) throw ValidationError("evolve: initial state must be at time 0");

  Trajectory traj;
  traj.census = filter_census(p.grid, p.tau, p.filter_constant);
  StatePair s{filter_pi(s0.u, p.tau, p.filter_constant),
              filter_pi(s0.v, p.tau, p.filter_constant), 0.0};
  for (const auto& obs : opts.observers) obs(0, s);

  History hist;
  const std::size_t steps = p.steps();
  for (std::size_t n = 0; n < steps; ++n) {
    hist.push(s.u);
    s = lie_step(s, hist, n, p);
    // Re-anchor the stamp to avoid drift from repeated addition.
    s.time = static_cast<double>(n + 1) * p.tau;
    if (!finite_sample(s.u) || !finite_sample(s.v)) {
      throw BlowUpError(n + 1, "non-finite state");
    }
    for (const auto& obs : opts.observers) obs(n + 1, s);
    if (opts.snapshot_every > 0 && (n + 1) % opts.snapshot_every == 0) {
      traj.snapshots.push_back(s);
    }
  }
  traj.final_state = std::move(s);
  traj.steps = steps;
  return traj;
}

double sphere_deviation(const StatePair& s) {
  const auto pu = to_physical(s.u);
  double worst = 0.0;
  for (std::size_t i = 0; i < pu[0].size(); ++i) {
    const double r = std::sqrt(pu[0][i] * pu[0][i] + pu[1][i] * pu[1][i] +
                               pu[2][i] * pu[2][i]);
    worst = std::max(worst, std::abs(r - 1.0));
  }
  return worst;
}

}  // namespace wm
