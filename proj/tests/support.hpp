#pragma once

#include <cmath>
#include <random>

#include "wavemaps/spectral.hpp"

namespace wmtest {

using wm::cplx;

inline wm::ScalarField random_real(const wm::GridSpec& g, long mmax, std::uint64_t seed,
                                   double damping = 0.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<double> samples(g.size());
  wm::ScalarField f(g);
  auto lat = wm::lattice(g);
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    bool inside = true;
    for (int d = 0; d < g.dim; ++d) {
      inside = inside && std::abs(lat->points[i].k[d] / g.dk()) <= mmax;
    }
    if (inside) {
      const double w = 1.0 / (1.0 + damping * lat->points[i].norm * lat->points[i].norm);
      f.coeffs[i] = {w * gauss(rng), w * gauss(rng)};
    }
  }
  // Real part in physical space keeps the field real.
  auto x = wm::to_physical(f);
  return wm::to_spectral(std::span<const double>(x), g);
}

inline wm::ScalarField random_complex(const wm::GridSpec& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  wm::ScalarField f(g);
  for (auto& c : f.coeffs) c = {gauss(rng), gauss(rng)};
  return f;
}

inline wm::Field random_field(const wm::GridSpec& g, long mmax, std::uint64_t seed,
                              double damping = 0.0) {
  wm::Field f;
  for (std::size_t a = 0; a < 3; ++a) f[a] = random_real(g, mmax, seed * 7 + a, damping);
  return f;
}

inline double max_diff(const wm::ScalarField& a, const wm::ScalarField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    d = std::max(d, std::abs(a.coeffs[i] - b.coeffs[i]));
  }
  return d;
}

inline double max_diff(const wm::Field& a, const wm::Field& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < 3; ++k) d = std::max(d, max_diff(a[k], b[k]));
  return d;
}

inline double max_abs(const wm::Field& a) {
  double d = 0.0;
  for (const auto& c : a.c) {
    for (const auto& z : c.coeffs) d = std::max(d, std::abs(z));
  }
  return d;
}

inline std::size_t index_of(const wm::GridSpec& g, long m) {
  const long n = static_cast<long>(g.n_per_axis);
  return static_cast<std::size_t>((m % n + n) % n);
}

}  // namespace wmtest
