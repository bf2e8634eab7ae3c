#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

#include "wavemaps/error.hpp"

namespace wm {

using cplx = std::complex<double>;

/// Periodic lattice [-L/2, L/2)^dim with n_per_axis points per axis.
///
/// Spacing and the frequency step are derived from (n_per_axis, period);
/// the frequency lattice is (2*pi/L) * {-N/2, ..., N/2-1}^dim.
struct GridSpec {
  int dim = 1;
  std::size_t n_per_axis = 8;
  double period = 2.0 * std::numbers::pi;

  /// Throws ValidationError unless dim in {1,2,3}, N a power of two, L > 0.
  void validate() const;

  std::size_t size() const;
  double dx() const { return period / static_cast<double>(n_per_axis); }
  double dk() const { return 2.0 * std::numbers::pi / period; }
  double nyquist() const { return dk() * static_cast<double>(n_per_axis / 2); }
  /// Measure of the torus, L^dim.
  double volume() const { return std::pow(period, dim); }
  std::vector<int> shape() const;

  /// Signed lattice index in {-N/2, ..., N/2-1} for FFT-ordered position i.
  long mode_index(std::size_t i) const {
    const auto n = static_cast<long>(n_per_axis);
    const auto m = static_cast<long>(i);
    return m < n / 2 ? m : m - n;
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Physical wavevector of a lattice point.
struct Wavevector {
  std::array<double, 3> k{0.0, 0.0, 0.0};
  double norm = 0.0;
};

/// Precomputed wavevectors, indexed like the coefficient array.
struct Lattice {
  GridSpec grid;
  std::vector<Wavevector> points;
  /// (-1)^(m1+m2+m3): phase between raw DFT bins and Fourier coefficients
  /// referenced to the x = -L/2 origin of the sample grid.
  std::vector<double> origin_sign;
};

/// Shared, immutable lattice for a grid. Lookups are thread safe.
std::shared_ptr<const Lattice> lattice(const GridSpec& grid);

/// Spectral coefficients c(k) with f(x) = sum_k c(k) e^{i k.x}.
struct ScalarField {
  GridSpec grid;
  std::vector<cplx> coeffs;

  ScalarField() = default;
  explicit ScalarField(const GridSpec& g) : grid(g), coeffs(g.size()) {}

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double a);
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double a, ScalarField f);

/// Three components of an R^3-valued map sharing one grid.
struct Field {
  std::array<ScalarField, 3> c;

  Field() = default;
  explicit Field(const GridSpec& g) : c{ScalarField(g), ScalarField(g), ScalarField(g)} {}

  const GridSpec& grid() const { return c[0].grid; }
  ScalarField& operator[](std::size_t i) { return c[i]; }
  const ScalarField& operator[](std::size_t i) const { return c[i]; }

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double a);
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double a, Field f);

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);

// Transforms. Sample ordering is row-major with axes (x1, x2, x3) and
// x_j = -L/2 + j*dx. The constant 1 maps to coefficient 1 at k = 0.
ScalarField to_spectral(std::span<const double> samples, const GridSpec& grid);
ScalarField to_spectral(std::span<const cplx> samples, const GridSpec& grid);
std::vector<double> to_physical(const ScalarField& f);
std::vector<cplx> to_physical_complex(const ScalarField& f);

/// Physical coordinates of sample i along each axis.
std::array<double, 3> sample_point(const GridSpec& grid, std::size_t i);

/// Max relative violation of c(-k) = conj(c(k)).
double conjugate_symmetry_defect(const ScalarField& f);

/// (sum_k <k>^{2s} |c(k)|^2 L^dim)^{1/2}, summed over components.
double sobolev_norm(const ScalarField& f, double s);
double sobolev_norm(const Field& f, double s);

/// L^2 norm on the torus from physical samples, (sum |f|^2 dx^dim)^{1/2}.
double physical_l2_norm(std::span<const double> samples, const GridSpec& grid);

/// coeffs(k) -> m(k) coeffs(k). m is called with a Wavevector and may return
/// a real or complex value.
template <class Symbol>
ScalarField apply_multiplier(const ScalarField& f, Symbol&& m) {
  auto lat = lattice(f.grid);
  ScalarField out(f.grid);
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    out.coeffs[i] = f.coeffs[i] * m(lat->points[i]);
  }
  return out;
}

template <class Symbol>
Field apply_multiplier(const Field& f, Symbol&& m) {
  Field out;
  for (std::size_t i = 0; i < 3; ++i) out[i] = apply_multiplier(f[i], m);
  return out;
}

/// Smooth radial bump: 1 on [0, 1/2], 0 on [1, inf), C^infinity bridge.
double chi(double r);

/// Littlewood-Paley symbol psi_k(r) = chi(2^-k r) - chi(2^-(k-1) r), psi_0 = chi.
double littlewood_paley_symbol(int k, double r);

/// Symbol of the frequency filter, chi(c * tau^{1/2} * |k|).
double filter_symbol(double norm_k, double tau, double filter_constant);

/// Multiplies by chi(c tau^{1/2} |k|). tau must lie in (0, 1).
Field filter_pi(const Field& f, double tau, double filter_constant = 100.0);
ScalarField filter_pi(const ScalarField& f, double tau,
                      double filter_constant = 100.0);

/// Dyadic block P_k f.
ScalarField littlewood_paley(const ScalarField& f, int k);

/// Spectral gradient component d/dx_axis; the Nyquist bin is zeroed.
ScalarField derivative(const ScalarField& f, int axis);

/// Spectral Laplacian.
ScalarField laplacian(const ScalarField& f);

struct FilterCensus {
  std::size_t retained = 0;     // chi == 1
  std::size_t attenuated = 0;   // 0 < chi < 1
  std::size_t annihilated = 0;  // chi == 0
};

/// Counts lattice modes by how the filter treats them.
FilterCensus filter_census(const GridSpec& grid, double tau,
                           double filter_constant);

}  // namespace wm
