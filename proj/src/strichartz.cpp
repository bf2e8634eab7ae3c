#include <algorithm>
#include <cmath>
#include <random>

#include "wavemaps/bourgain.hpp"

namespace wm {

double StrichartzReport::spread() const {
  if (levels.empty()) return 1.0;
  double lo = levels.front().max_ratio;
  double hi = lo;
  for (const auto& l : levels) {
    lo = std::min(lo, l.max_ratio);
    hi = std::max(hi, l.max_ratio);
  }
  return hi / lo;
}

double strichartz_gamma(double p, double q, int dim) {
  const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
  return 0.5 * dim - ip - dim / q;
}

namespace {

void check_exponents(double p, double q) {
  const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
  if (!(p > 2.0) || !(q >= 2.0) || std::isinf(q) || ip + 1.0 / q > 0.5 + 1e-12) {
    throw ValidationError("strichartz: (p, q) = (" + std::to_string(p) + ", " +
                          std::to_string(q) +
                          ") is not admissible; need 2 < p <= inf, 2 <= q < inf, "
                          "1/p + 1/q <= 1/2");
  }
}

std::size_t window_frames(double window, double tau) {
  const double m = window / tau;
  const auto n = static_cast<std::size_t>(std::llround(m));
  if (n == 0 || std::abs(m - static_cast<double>(n)) > 1e-9 * m) {
    throw ValidationError("strichartz: window must be a positive multiple of tau");
  }
  return n;
}

// |z|^q from |z|^2, avoiding pow for the common even exponents.
double abs_pow(double norm2, double q) {
  if (q == 2.0) return norm2;
  if (q == 4.0) return norm2 * norm2;
  return std::pow(norm2, 0.5 * q);
}

}  // namespace

double strichartz_ratio(const ScalarField& f, double p, double q, int k, double tau,
                        const StrichartzSetup& setup) {
  check_exponents(p, q);
  if (k < 1) throw ValidationError("strichartz: k must be >= 1");
  require_same_grid(f.grid, setup.grid, "strichartz_ratio");
  const auto& grid = f.grid;
  const int dim = grid.dim;
  const double gamma = strichartz_gamma(p, q, dim);
  auto lat = lattice(grid);
  const ScalarField block = littlewood_paley(f, k);

  double denom = 0.0;
  for (std::size_t i = 0; i < block.coeffs.size(); ++i) {
    const double r = lat->points[i].norm;
    if (r > 0.0) denom += std::pow(r, 2.0 * gamma) * std::norm(block.coeffs[i]);
  }
  denom = std::sqrt(denom * grid.volume());
  if (!(denom > 0.0)) throw ValidationError("strichartz: P_k f vanishes");

  const std::size_t frames = window_frames(setup.window, tau);
  const double cell = std::pow(grid.dx(), dim);
  double acc = 0.0;
  ScalarField frame(grid);
  for (std::size_t n = 0; n < frames; ++n) {
    const double t = static_cast<double>(n) * tau * setup.sign;
    for (std::size_t i = 0; i < block.coeffs.size(); ++i) {
      frame.coeffs[i] = block.coeffs[i] * std::polar(1.0, t * lat->points[i].norm);
    }
    double lq = 0.0;
    for (const auto& z : to_physical_complex(frame)) lq += abs_pow(std::norm(z), q);
    lq = std::pow(lq * cell, 1.0 / q);
    if (std::isinf(p)) {
      acc = std::max(acc, lq);
    } else {
      acc += tau * std::pow(lq, p);
    }
  }
  const double num = std::isinf(p) ? acc : std::pow(acc, 1.0 / p);
  return num / denom;
}

StrichartzReport strichartz_monitor(double p, double q, int k, std::size_t trials,
                                    const std::vector<double>& taus,
                                    const StrichartzSetup& setup) {
  check_exponents(p, q);
  if (trials == 0 || taus.empty()) {
    throw ValidationError("strichartz_monitor: need at least one trial and one tau");
  }
  setup.grid.validate();
  StrichartzReport rep;
  rep.p = p;
  rep.q = q;
  rep.k = k;
  rep.gamma = strichartz_gamma(p, q, setup.grid.dim);

  std::vector<ScalarField> data;
  data.reserve(trials);
  std::mt19937_64 rng(setup.seed);
  std::normal_distribution<double> gauss;
  for (std::size_t t = 0; t < trials; ++t) {
    ScalarField f(setup.grid);
    for (auto& c : f.coeffs) c = {gauss(rng), gauss(rng)};
    data.push_back(std::move(f));
  }
  for (double tau : taus) {
    std::vector<double> ratios;
    ratios.reserve(trials);
    for (const auto& f : data) ratios.push_back(strichartz_ratio(f, p, q, k, tau, setup));
    std::sort(ratios.begin(), ratios.end());
    StrichartzLevel lvl;
    lvl.tau = tau;
    lvl.max_ratio = ratios.back();
    lvl.median_ratio = ratios[ratios.size() / 2];
    rep.levels.push_back(lvl);
  }
  return rep;
}

}  // namespace wm
