#pragma once

#include <cstdint>

#include "wavemaps/propagator.hpp"

namespace wm {

/// Angle data of a geodesic wave map u = (cos theta, sin theta, 0) where
/// theta solves the linear wave equation.
struct GeodesicData {
  ScalarField theta0;
  ScalarField thetadot0;
};

/// theta and d(theta)/dt propagated exactly to time t.
std::pair<ScalarField, ScalarField> propagate_angle(const GeodesicData& d, double t);

/// Exact wave map at time t, sampled on the grid.
StatePair geodesic_state(const GeodesicData& d, double t);

/// Gaussian angle amplitude * exp(-|x|^2 / width^2) with zero angular velocity.
GeodesicData gaussian_geodesic(const GridSpec& grid, double amplitude = 1.0,
                               double width = 1.0);

/// theta0(k) = <k>^{-(s + dim/2)} / log(2 + |k|^2) on the physical lattice.
///
/// Phases are zero unless random_phases is set, in which case they are drawn
/// from seed and symmetrized so the field stays real.
ScalarField rough_theta0(const GridSpec& grid, double s, std::uint64_t seed = 0,
                         bool random_phases = false);

/// Initial data of the 1D two-angle example: theta = 2 exp(-x^2),
/// phi = x exp(-x^2), v0 = 0. Requires the Gaussians to decay below 1e-12
/// at the seam.
StatePair fig1_initial_data(const GridSpec& grid);

/// Constant map p with zero velocity.
StatePair constant_map(const GridSpec& grid, const std::array<double, 3>& p);

/// max_x |u . v|, the tangency defect of user data.
double tangency_defect(const StatePair& s);

}  // namespace wm
