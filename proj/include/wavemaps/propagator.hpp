#pragma once

#include "wavemaps/spectral.hpp"

namespace wm {

/// Position u, velocity v = du/dt, and the time they refer to.
struct StatePair {
  Field u;
  Field v;
  double time = 0.0;

  const GridSpec& grid() const { return u.grid(); }
};

/// Exact linear wave flow over time t (any sign).
///
/// Per mode: [[cos(t|k|), sin(t|k|)/|k|], [-|k| sin(t|k|), cos(t|k|)]],
/// with [[1, t], [0, 1]] at k = 0. Advances the time stamp by t.
StatePair free_evolution(const StatePair& s, double t);

/// e^{sign * i t |k|} applied to each coefficient; sign must be +1 or -1.
ScalarField half_wave(const ScalarField& f, double t, int sign);

/// Free energy |k|^2 |u(k)|^2 + |v(k)|^2 of lattice mode i, summed over components.
double mode_energy(const StatePair& s, std::size_t i);

}  // namespace wm
