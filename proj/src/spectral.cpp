#include "wavemaps/spectral.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "wavemaps/fft.hpp"

namespace wm {

void GridSpec::validate() const {
  if (dim < 1 || dim > 3) {
    throw ValidationError("grid dim must be 1, 2 or 3, got " + std::to_string(dim));
  }
  if (n_per_axis < 2 || (n_per_axis & (n_per_axis - 1)) != 0) {
    throw ValidationError("n_per_axis must be a power of two >= 2, got " +
                          std::to_string(n_per_axis));
  }
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw ValidationError("period must be positive and finite");
  }
}

std::size_t GridSpec::size() const {
  std::size_t s = 1;
  for (int d = 0; d < dim; ++d) s *= n_per_axis;
  return s;
}

std::vector<int> GridSpec::shape() const {
  return std::vector<int>(static_cast<std::size_t>(dim),
                          static_cast<int>(n_per_axis));
}

namespace {

std::shared_ptr<const Lattice> build_lattice(const GridSpec& grid) {
  auto lat = std::make_shared<Lattice>();
  lat->grid = grid;
  const std::size_t total = grid.size();
  lat->points.resize(total);
  lat->origin_sign.resize(total);
  const std::size_t n = grid.n_per_axis;
  const double dk = grid.dk();
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rem = i;
    Wavevector w;
    long parity = 0;
    for (int d = grid.dim - 1; d >= 0; --d) {
      const long m = grid.mode_index(rem % n);
      rem /= n;
      w.k[static_cast<std::size_t>(d)] = dk * static_cast<double>(m);
      parity += m;
    }
    w.norm = std::sqrt(w.k[0] * w.k[0] + w.k[1] * w.k[1] + w.k[2] * w.k[2]);
    lat->points[i] = w;
    lat->origin_sign[i] = (parity % 2 == 0) ? 1.0 : -1.0;
  }
  return lat;
}

}  // namespace

std::shared_ptr<const Lattice> lattice(const GridSpec& grid) {
  static std::mutex mu;
  static std::map<std::tuple<int, std::size_t, double>,
                  std::shared_ptr<const Lattice>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(grid.dim, grid.n_per_axis, grid.period);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  grid.validate();
  auto lat = build_lattice(grid);
  cache.emplace(key, lat);
  return lat;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
  if (!(a == b)) throw ValidationError(std::string(where) + ": grid mismatch");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid, o.grid, "ScalarField +=");
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid, o.grid, "ScalarField -=");
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double a) {
  for (auto& c : coeffs) c *= a;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double a, ScalarField f) { return f *= a; }

Field& Field::operator+=(const Field& o) {
  for (std::size_t i = 0; i < 3; ++i) c[i] += o.c[i];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  for (std::size_t i = 0; i < 3; ++i) c[i] -= o.c[i];
  return *this;
}

Field& Field::operator*=(double a) {
  for (auto& s : c) s *= a;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double a, Field f) { return f *= a; }

ScalarField to_spectral(std::span<const cplx> samples, const GridSpec& grid) {
  auto lat = lattice(grid);
  if (samples.size() != grid.size()) {
    throw ValidationError("to_spectral: expected " + std::to_string(grid.size()) +
                          " samples, got " + std::to_string(samples.size()));
  }
  ScalarField f(grid);
  std::copy(samples.begin(), samples.end(), f.coeffs.begin());
  fft::transform(f.coeffs, grid.shape(), fft::Direction::forward);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    f.coeffs[i] *= scale * lat->origin_sign[i];
  }
  return f;
}

ScalarField to_spectral(std::span<const double> samples, const GridSpec& grid) {
  std::vector<cplx> tmp(samples.begin(), samples.end());
  return to_spectral(std::span<const cplx>(tmp), grid);
}

std::vector<cplx> to_physical_complex(const ScalarField& f) {
  auto lat = lattice(f.grid);
  if (f.coeffs.size() != f.grid.size()) {
    throw ValidationError("to_physical: coefficient count does not match grid");
  }
  std::vector<cplx> out(f.coeffs.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = f.coeffs[i] * lat->origin_sign[i];
  }
  fft::transform(out, f.grid.shape(), fft::Direction::backward);
  return out;
}

std::vector<double> to_physical(const ScalarField& f) {
  auto z = to_physical_complex(f);
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].real();
  return out;
}

std::array<double, 3> sample_point(const GridSpec& grid, std::size_t i) {
  std::array<double, 3> x{0.0, 0.0, 0.0};
  const std::size_t n = grid.n_per_axis;
  for (int d = grid.dim - 1; d >= 0; --d) {
    x[static_cast<std::size_t>(d)] =
        -0.5 * grid.period + static_cast<double>(i % n) * grid.dx();
    i /= n;
  }
  return x;
}

namespace {

// Linear index of -k for the FFT-ordered position i.
std::size_t negated_index(const GridSpec& grid, std::size_t i) {
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

double conjugate_symmetry_defect(const ScalarField& f) {
  double scale = 0.0;
  for (const auto& c : f.coeffs) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    const auto j = negated_index(f.grid, i);
    worst = std::max(worst, std::abs(f.coeffs[j] - std::conj(f.coeffs[i])));
  }
  return worst / scale;
}

double sobolev_norm(const ScalarField& f, double s) {
  auto lat = lattice(f.grid);
  double sum = 0.0;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    const auto c = f.coeffs[i];
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw ValidationError("sobolev_norm: non-finite coefficient");
    }
    const double k2 = lat->points[i].norm * lat->points[i].norm;
    sum += std::pow(1.0 + k2, s) * std::norm(c);
  }
  return std::sqrt(sum * f.grid.volume());
}

double sobolev_norm(const Field& f, double s) {
  double sum = 0.0;
  for (const auto& comp : f.c) {
    const double n = sobolev_norm(comp, s);
    sum += n * n;
  }
  return std::sqrt(sum);
}

double physical_l2_norm(std::span<const double> samples, const GridSpec& grid) {
  double sum = 0.0;
  for (double v : samples) sum += v * v;
  return std::sqrt(sum * std::pow(grid.dx(), grid.dim));
}

double chi(double r) {
  r = std::abs(r);
  if (r <= 0.5) return 1.0;
  if (r >= 1.0) return 0.0;
  auto omega = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  const double a = omega(2.0 - 2.0 * r);
  const double b = omega(2.0 * r - 1.0);
  return a / (a + b);
}

double littlewood_paley_symbol(int k, double r) {
  if (k < 0) throw ValidationError("littlewood_paley: k must be >= 0");
  if (k == 0) return chi(r);
  return chi(std::ldexp(r, -k)) - chi(std::ldexp(r, -(k - 1)));
}

double filter_symbol(double norm_k, double tau, double filter_constant) {
  return chi(filter_constant * std::sqrt(tau) * norm_k);
}

namespace {

void check_tau(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw ValidationError("filter_pi: tau must lie in (0, 1)");
  }
}

}  // namespace

ScalarField filter_pi(const ScalarField& f, double tau, double filter_constant) {
  check_tau(tau);
  return apply_multiplier(f, [&](const Wavevector& w) {
    return filter_symbol(w.norm, tau, filter_constant);
  });
}

Field filter_pi(const Field& f, double tau, double filter_constant) {
  check_tau(tau);
  return apply_multiplier(f, [&](const Wavevector& w) {
    return filter_symbol(w.norm, tau, filter_constant);
  });
}

ScalarField littlewood_paley(const ScalarField& f, int k) {
  if (k < 0) throw ValidationError("littlewood_paley: k must be >= 0");
  return apply_multiplier(
      f, [k](const Wavevector& w) { return littlewood_paley_symbol(k, w.norm); });
}

ScalarField derivative(const ScalarField& f, int axis) {
  if (axis < 0 || axis >= f.grid.dim) {
    throw ValidationError("derivative: axis out of range");
  }
  const double nyq = -f.grid.nyquist();
  const auto a = static_cast<std::size_t>(axis);
  return apply_multiplier(f, [&](const Wavevector& w) {
    return w.k[a] == nyq ? cplx(0.0) : cplx(0.0, w.k[a]);
  });
}

ScalarField laplacian(const ScalarField& f) {
  return apply_multiplier(f, [](const Wavevector& w) { return -w.norm * w.norm; });
}

FilterCensus filter_census(const GridSpec& grid, double tau,
                           double filter_constant) {
  auto lat = lattice(grid);
  FilterCensus c;
  for (const auto& w : lat->points) {
    const double x = filter_symbol(w.norm, tau, filter_constant);
    if (x == 1.0) {
      ++c.retained;
    } else if (x == 0.0) {
      ++c.annihilated;
    } else {
      ++c.attenuated;
    }
  }
  return c;
}

}  // namespace wm
