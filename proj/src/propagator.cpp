#include "wavemaps/propagator.hpp"

#include <cmath>

namespace wm {

StatePair free_evolution(const StatePair& s, double t) {
  if (!std::isfinite(t)) throw ValidationError("free_evolution: non-finite t");
  require_same_grid(s.u.grid(), s.v.grid(), "free_evolution");
  auto lat = lattice(s.grid());
  const std::size_t n = s.grid().size();
  StatePair out{Field(s.grid()), Field(s.grid()), s.time + t};
  for (std::size_t i = 0; i < n; ++i) {
    const double k = lat->points[i].norm;
    const double c = std::cos(t * k);
    const double sinc = k > 0.0 ? std::sin(t * k) / k : t;
    const double lower = -k * std::sin(t * k);
    for (std::size_t a = 0; a < 3; ++a) {
      const cplx u = s.u[a].coeffs[i];
      const cplx v = s.v[a].coeffs[i];
      out.u[a].coeffs[i] = c * u + sinc * v;
      out.v[a].coeffs[i] = lower * u + c * v;
    }
  }
  return out;
}

ScalarField half_wave(const ScalarField& f, double t, int sign) {
  if (sign != 1 && sign != -1) throw ValidationError("half_wave: sign must be +-1");
  return apply_multiplier(f, [&](const Wavevector& w) {
    return std::polar(1.0, static_cast<double>(sign) * t * w.norm);
  });
}

double mode_energy(const StatePair& s, std::size_t i) {
  auto lat = lattice(s.grid());
  const double k2 = lat->points[i].norm * lat->points[i].norm;
  double e = 0.0;
  for (std::size_t a = 0; a < 3; ++a) {
    e += k2 * std::norm(s.u[a].coeffs[i]) + std::norm(s.v[a].coeffs[i]);
  }
  return e;
}

}  // namespace wm
