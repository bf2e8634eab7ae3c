#include "wavemaps/bourgain.hpp"

#include <algorithm>
#include <cmath>

#include "wavemaps/fft.hpp"

namespace wm {

double SpacetimeSpectrum::dsigma() const {
  return 2.0 * std::numbers::pi / (static_cast<double>(length) * tau);
}

double SpacetimeSpectrum::sigma(std::size_t j) const {
  const auto m = static_cast<long>(length);
  const auto jj = static_cast<long>(j);
  const long signed_j = jj < (m + 1) / 2 ? jj : jj - m;
  return dsigma() * static_cast<double>(signed_j);
}

double SpacetimeSpectrum::parseval_weight() const {
  return grid.volume() * dsigma() / (2.0 * std::numbers::pi);
}

cplx dtau(double x, double tau) {
  return (std::polar(1.0, x * tau) - 1.0) / tau;
}

namespace {

void check_sequence(const SpacetimeSequence& seq) {
  if (seq.frames.empty()) throw ValidationError("spacetime sequence has no frames");
  if (!(seq.tau > 0.0)) throw ValidationError("spacetime sequence needs tau > 0");
  for (const auto& f : seq.frames) {
    require_same_grid(seq.frames.front().grid, f.grid, "spacetime sequence");
  }
}

// In-place DFT along the time axis of a [time][space] array.
void time_dft(std::vector<cplx>& data, std::size_t m, std::size_t s,
              fft::Direction dir) {
  std::vector<cplx> column(m);
  const std::vector<int> shape{static_cast<int>(m)};
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t n = 0; n < m; ++n) column[n] = data[n * s + i];
    fft::transform(column, shape, dir);
    for (std::size_t n = 0; n < m; ++n) data[n * s + i] = column[n];
  }
}

}  // namespace

SpacetimeSpectrum spacetime_transform(const SpacetimeSequence& seq) {
  check_sequence(seq);
  SpacetimeSpectrum out;
  out.grid = seq.grid();
  out.tau = seq.tau;
  out.length = seq.length();
  const std::size_t s = out.grid.size();
  out.data.resize(out.length * s);
  for (std::size_t n = 0; n < out.length; ++n) {
    std::copy(seq.frames[n].coeffs.begin(), seq.frames[n].coeffs.end(),
              out.data.begin() + static_cast<std::ptrdiff_t>(n * s));
  }
  time_dft(out.data, out.length, s, fft::Direction::forward);
  for (auto& z : out.data) z *= seq.tau;
  return out;
}

SpacetimeSequence inverse_spacetime_transform(const SpacetimeSpectrum& spec) {
  const std::size_t s = spec.grid.size();
  std::vector<cplx> data = spec.data;
  time_dft(data, spec.length, s, fft::Direction::backward);
  const double scale = 1.0 / (static_cast<double>(spec.length) * spec.tau);
  SpacetimeSequence seq;
  seq.tau = spec.tau;
  seq.frames.reserve(spec.length);
  for (std::size_t n = 0; n < spec.length; ++n) {
    ScalarField f(spec.grid);
    for (std::size_t i = 0; i < s; ++i) f.coeffs[i] = data[n * s + i] * scale;
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

double l2_tau_norm(const SpacetimeSequence& seq) {
  check_sequence(seq);
  const double cell = std::pow(seq.grid().dx(), seq.grid().dim);
  double sum = 0.0;
  for (const auto& f : seq.frames) {
    for (const auto& z : to_physical_complex(f)) sum += std::norm(z);
  }
  return std::sqrt(seq.tau * cell * sum);
}

double BourgainWeights::operator()(double sigma, double xi) const {
  auto bracket = [](double x) { return std::sqrt(1.0 + x * x); };
  const double lower = std::abs(dtau(std::abs(sigma) - xi, tau));
  double upper = 0.0;
  if (kind == BourgainWeight::literal) {
    upper = std::abs(dtau(std::abs(sigma) + xi, tau));
  } else {
    upper = std::abs(dtau(sigma, tau)) + std::abs(dtau(xi, tau));
  }
  return std::pow(bracket(upper), s) * std::pow(bracket(lower), b);
}

double bourgain_norm(const SpacetimeSequence& seq, double s, double b,
                     BourgainWeight kind) {
  check_sequence(seq);
  auto lat = lattice(seq.grid());
  const double limit = std::numbers::pi / (2.0 * seq.tau);
  double total = 0.0;
  for (const auto& f : seq.frames) {
    for (const auto& c : f.coeffs) total += std::norm(c);
  }
  for (std::size_t n = 0; n < seq.length(); ++n) {
    const auto& f = seq.frames[n];
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
      if (lat->points[i].norm > limit && std::norm(f.coeffs[i]) > 1e-28 * total) {
        throw ValidationError("bourgain_norm: frame " + std::to_string(n) +
                              " has energy at |xi| = " +
                              std::to_string(lat->points[i].norm) +
                              " > pi/(2 tau) = " + std::to_string(limit));
      }
    }
  }
  const auto spec = spacetime_transform(seq);
  const BourgainWeights w{s, b, seq.tau, kind};
  const std::size_t sz = spec.grid.size();
  double sum = 0.0;
  for (std::size_t j = 0; j < spec.length; ++j) {
    const double sigma = spec.sigma(j);
    for (std::size_t i = 0; i < sz; ++i) {
      const double weight = w(sigma, lat->points[i].norm);
      sum += weight * weight * std::norm(spec.data[j * sz + i]);
    }
  }
  return std::sqrt(spec.parseval_weight() * sum);
}

bool in_sharp_band(int l, double m) {
  const double a = std::abs(m);
  if (l < 0) return false;
  if (l == 0) return a <= 1.0;
  return a > std::ldexp(1.0, l - 1) && a <= std::ldexp(1.0, l);
}

double modulation_symbol(int l, double m) {
  return littlewood_paley_symbol(l, std::abs(m));
}

SpacetimeSpectrum modulation_cutoff(const SpacetimeSpectrum& spec, int l, bool sharp) {
  if (l < 0) throw ValidationError("modulation_cutoff: l must be >= 0");
  auto lat = lattice(spec.grid);
  SpacetimeSpectrum out = spec;
  const std::size_t sz = spec.grid.size();
  for (std::size_t j = 0; j < spec.length; ++j) {
    const double sigma = spec.sigma(j);
    for (std::size_t i = 0; i < sz; ++i) {
      const double m = modulation(sigma, lat->points[i].norm);
      const double w = sharp ? (in_sharp_band(l, m) ? 1.0 : 0.0) : modulation_symbol(l, m);
      out.data[j * sz + i] *= w;
    }
  }
  return out;
}

SpacetimeSequence modulation_cutoff(const SpacetimeSequence& seq, int l, bool sharp) {
  return inverse_spacetime_transform(
      modulation_cutoff(spacetime_transform(seq), l, sharp));
}

int max_modulation_band(const SpacetimeSpectrum& spec) {
  auto lat = lattice(spec.grid);
  double worst = 0.0;
  for (std::size_t j = 0; j < spec.length; ++j) {
    for (const auto& p : lat->points) {
      worst = std::max(worst, std::abs(modulation(spec.sigma(j), p.norm)));
    }
  }
  int l = 0;
  while (std::ldexp(1.0, l) < worst) ++l;
  return l;
}

double box_symbol_check(const SpacetimeSequence& seq, double tau) {
  check_sequence(seq);
  const std::size_t m = seq.length();
  auto lat = lattice(seq.grid());
  SpacetimeSequence boxed;
  boxed.tau = tau;
  boxed.frames.reserve(m);
  const double inv = 1.0 / (tau * tau);
  for (std::size_t n = 0; n < m; ++n) {
    const auto& now = seq.frames[n];
    const auto& prev = seq.frames[(n + m - 1) % m];
    const auto& prev2 = seq.frames[(n + 2 * m - 2) % m];
    ScalarField out(now.grid);
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
      const double k2 = lat->points[i].norm * lat->points[i].norm;
      out.coeffs[i] =
          (now.coeffs[i] - 2.0 * prev.coeffs[i] + prev2.coeffs[i]) * inv + k2 * now.coeffs[i];
    }
    boxed.frames.push_back(std::move(out));
  }
  SpacetimeSequence base = seq;
  base.tau = tau;
  const auto lhs = spacetime_transform(boxed);
  const auto rhs_in = spacetime_transform(base);
  const std::size_t sz = lhs.grid.size();
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t j = 0; j < lhs.length; ++j) {
    const cplx d = dtau(-lhs.sigma(j), tau);
    for (std::size_t i = 0; i < sz; ++i) {
      const double xi = lat->points[i].norm;
      const cplx symbol = xi * xi + d * d;
      const cplx rhs = symbol * rhs_in.data[j * sz + i];
      diff = std::max(diff, std::abs(lhs.data[j * sz + i] - rhs));
      scale = std::max(scale, std::abs(rhs));
    }
  }
  return scale > 0.0 ? diff / scale : diff;
}

BernsteinBound bernstein_bound(const SpacetimeSequence& seq) {
  check_sequence(seq);
  const auto spec = spacetime_transform(seq);
  const std::size_t sz = spec.grid.size();
  double peak = 0.0;
  for (const auto& z : spec.data) peak = std::max(peak, std::abs(z));
  BernsteinBound out;
  for (std::size_t i = 0; i < sz; ++i) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < spec.length; ++j) {
      if (std::abs(spec.data[j * sz + i]) > 1e-13 * peak) ++count;
    }
    out.max_count = std::max(out.max_count, count);
  }
  const double vol = seq.grid().volume();
  double l2 = 0.0;
  for (const auto& f : seq.frames) {
    double frame = 0.0;
    for (const auto& c : f.coeffs) frame += std::norm(c);
    frame *= vol;
    out.sup_norm = std::max(out.sup_norm, std::sqrt(frame));
    l2 += seq.tau * frame;
  }
  out.l2_norm = std::sqrt(l2);
  out.factor = std::sqrt(static_cast<double>(out.max_count) * spec.dsigma() /
                         (2.0 * std::numbers::pi));
  return out;
}

}  // namespace wm
