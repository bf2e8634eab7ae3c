#include "wavemaps/refsol.hpp"

#include <cmath>
#include <random>

#include "wavemaps/timestepper.hpp"

namespace wm {

std::pair<ScalarField, ScalarField> propagate_angle(const GeodesicData& d, double t) {
  require_same_grid(d.theta0.grid, d.thetadot0.grid, "propagate_angle");
  auto lat = lattice(d.theta0.grid);
  ScalarField theta(d.theta0.grid);
  ScalarField rate(d.theta0.grid);
  for (std::size_t i = 0; i < theta.coeffs.size(); ++i) {
    const double k = lat->points[i].norm;
    const double c = std::cos(t * k);
    const double sinc = k > 0.0 ? std::sin(t * k) / k : t;
    theta.coeffs[i] = c * d.theta0.coeffs[i] + sinc * d.thetadot0.coeffs[i];
    rate.coeffs[i] = -k * std::sin(t * k) * d.theta0.coeffs[i] + c * d.thetadot0.coeffs[i];
  }
  return {theta, rate};
}

StatePair geodesic_state(const GeodesicData& d, double t) {
  const GridSpec& grid = d.theta0.grid;
  auto [theta, rate] = propagate_angle(d, t);
  const auto th = to_physical(theta);
  const auto om = to_physical(rate);
  PhysicalField u;
  PhysicalField v;
  for (std::size_t a = 0; a < 3; ++a) {
    u[a].assign(grid.size(), 0.0);
    v[a].assign(grid.size(), 0.0);
  }
  for (std::size_t x = 0; x < grid.size(); ++x) {
    const double c = std::cos(th[x]);
    const double s = std::sin(th[x]);
    u[0][x] = c;
    u[1][x] = s;
    v[0][x] = -s * om[x];
    v[1][x] = c * om[x];
  }
  return {to_spectral(u, grid), to_spectral(v, grid), t};
}

GeodesicData gaussian_geodesic(const GridSpec& grid, double amplitude, double width) {
  std::vector<double> samples(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = sample_point(grid, i);
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    samples[i] = amplitude * std::exp(-r2 / (width * width));
  }
  return {to_spectral(std::span<const double>(samples), grid), ScalarField(grid)};
}

namespace {

std::size_t negated(const GridSpec& grid, std::size_t i) {
  const std::size_t n = grid.n_per_axis;
  std::size_t out = 0;
  std::size_t stride = 1;
  for (int d = grid.dim - 1; d >= 0; --d) {
    const std::size_t p = i % n;
    i /= n;
    out += ((n - p) % n) * stride;
    stride *= n;
  }
  return out;
}

}  // namespace

ScalarField rough_theta0(const GridSpec& grid, double s, std::uint64_t seed,
                         bool random_phases) {
  if (!(s > 0.0)) throw ValidationError("rough_theta0: s must be > 0");
  auto lat = lattice(grid);
  ScalarField f(grid);
  const double exponent = s + 0.5 * grid.dim;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    const double k2 = lat->points[i].norm * lat->points[i].norm;
    f.coeffs[i] = std::pow(1.0 + k2, -0.5 * exponent) / std::log(2.0 + k2);
  }
  if (random_phases) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
      const std::size_t j = negated(grid, i);
      if (j < i) continue;
      if (j == i) continue;  // self-conjugate modes keep a real coefficient
      const double ph = phase(rng);
      f.coeffs[i] *= std::polar(1.0, ph);
      f.coeffs[j] = std::conj(f.coeffs[i]);
    }
  }
  return f;
}

StatePair fig1_initial_data(const GridSpec& grid) {
  if (grid.dim != 1) throw ValidationError("fig1_initial_data: needs a 1D grid");
  const double half = 0.5 * grid.period;
  if (2.0 * std::exp(-half * half) > 1e-12 || half * std::exp(-half * half) > 1e-12) {
    throw ValidationError("fig1_initial_data: Gaussians do not decay at the seam");
  }
  PhysicalField u;
  for (auto& comp : u) comp.resize(grid.size());
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = sample_point(grid, i)[0];
    const double g = std::exp(-x * x);
    const double theta = 2.0 * g;
    const double phi = x * g;
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    u[0][i] = r * (-ct + st * std::sin(phi));
    u[1][i] = -st * std::cos(phi);
    u[2][i] = r * (ct + st * std::sin(phi));
  }
  return {to_spectral(u, grid), Field(grid), 0.0};
}

StatePair constant_map(const GridSpec& grid, const std::array<double, 3>& p) {
  StatePair s{Field(grid), Field(grid), 0.0};
  for (std::size_t a = 0; a < 3; ++a) s.u[a].coeffs[0] = p[a];
  return s;
}

double tangency_defect(const StatePair& s) {
  const auto d = dot(to_physical(s.u), to_physical(s.v));
  double worst = 0.0;
  for (double x : d) worst = std::max(worst, std::abs(x));
  return worst;
}

}  // namespace wm
