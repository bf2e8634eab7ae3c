#include "wavemaps/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "wavemaps/timestepper.hpp"

namespace wm {

namespace {

CheckResult below(const std::string& suite, const std::string& name, double value,
                  double tol) {
  return {suite, name, value, tol, value <= tol ? "pass" : "fail"};
}

// Real field with Gaussian coefficients on |m| <= mmax, damped like 1/(1+k^2).
ScalarField random_real(const GridSpec& g, long mmax, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  auto lat = lattice(g);
  ScalarField f(g);
  const long n = static_cast<long>(g.n_per_axis);
  for (long m = 0; m <= mmax; ++m) {
    const auto i = static_cast<std::size_t>(m);
    const double k = lat->points[i].norm;
    const double w = 1.0 / (1.0 + k * k);
    if (m == 0) {
      f.coeffs[i] = w * gauss(rng);
    } else {
      const cplx c{w * gauss(rng), w * gauss(rng)};
      f.coeffs[i] = c;
      f.coeffs[static_cast<std::size_t>(n - m)] = std::conj(c);
    }
  }
  return f;
}

ScalarField random_complex(const GridSpec& g, long mmax, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  ScalarField f(g);
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    if (std::abs(g.mode_index(i)) <= mmax) f.coeffs[i] = {gauss(rng), gauss(rng)};
  }
  return f;
}

Field random_vector(const GridSpec& g, long mmax, std::mt19937_64& rng) {
  Field f;
  for (std::size_t a = 0; a < 3; ++a) f[a] = random_real(g, mmax, rng);
  return f;
}

// Levels a - j tau b + (j tau)^2 c for j = 2, 1, 0: random, but with the
// time increments of a sampled trajectory.
History random_history(const GridSpec& g, long mmax, double tau, std::mt19937_64& rng) {
  const Field a = random_vector(g, mmax, rng);
  const Field b = random_vector(g, mmax, rng);
  const Field c = random_vector(g, mmax, rng);
  auto level = [&](double j) { return a - (j * tau) * b + (j * j * tau * tau) * c; };
  return History::of(level(2.0), level(1.0), level(0.0));
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, std::abs(a[i] - b[i]));
  return out;
}

double max_rel_state(const StatePair& a, const StatePair& b) {
  double diff = 0.0;
  double scale = 0.0;
  for (const auto* pair : {&a, &b}) {
    for (const auto* f : {&pair->u, &pair->v}) {
      for (const auto& comp : f->c) {
        for (const auto& c : comp.coeffs) scale = std::max(scale, std::abs(c));
      }
    }
  }
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < a.u[k].coeffs.size(); ++i) {
      diff = std::max(diff, std::abs(a.u[k].coeffs[i] - b.u[k].coeffs[i]));
      diff = std::max(diff, std::abs(a.v[k].coeffs[i] - b.v[k].coeffs[i]));
    }
  }
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace

std::vector<CheckResult> identity_suite(const DiagnosticsConfig& d) {
  const std::string suite = "identities";
  std::vector<CheckResult> out;
  GridSpec g{1, d.identity_n, d.identity_period};
  g.validate();
  std::mt19937_64 rng(d.seed);
  const long mmax = static_cast<long>(d.identity_n / 4) - 1;
  const double tau = d.identity_tau;

  {
    const History gh = random_history(g, mmax, tau, rng);
    const History hh = random_history(g, mmax, tau, rng);
    out.push_back(below(suite, "null_identity",
                        max_abs_diff(null_bracket(gh, hh, tau), null_expansion(gh, hh, tau)),
                        d.tol_null_identity));
    out.push_back(below(suite, "null_identity_diagonal",
                        max_abs_diff(null_bracket(gh, gh, tau), null_expansion(gh, gh, tau)),
                        d.tol_null_identity));
  }

  SpacetimeSequence seq;
  seq.tau = tau;
  for (std::size_t n = 0; n < d.identity_m; ++n) seq.frames.push_back(random_complex(g, mmax, rng));

  out.push_back(below(suite, "box_symbol", box_symbol_check(seq, tau), d.tol_box_symbol));

  {
    const auto spec = spacetime_transform(seq);
    double sum = 0.0;
    for (const auto& z : spec.data) sum += std::norm(z);
    const double spectral = std::sqrt(spec.parseval_weight() * sum);
    const double physical = l2_tau_norm(seq);
    out.push_back(below(suite, "parseval", std::abs(spectral - physical) / physical,
                        d.tol_parseval));

    const auto back = inverse_spacetime_transform(spec);
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t n = 0; n < seq.length(); ++n) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        diff = std::max(diff, std::abs(back.frames[n].coeffs[i] - seq.frames[n].coeffs[i]));
        scale = std::max(scale, std::abs(seq.frames[n].coeffs[i]));
      }
    }
    out.push_back(below(suite, "inversion", diff / scale, d.tol_parseval));

    const double b0 = bourgain_norm(seq, 0.0, 0.0);
    out.push_back(below(suite, "bourgain_s0_b0", std::abs(b0 - physical) / physical,
                        d.tol_parseval));

    // Sharp bands cover the lattice exactly once, so the pieces add back
    // to the spectrum bit for bit.
    const int top = max_modulation_band(spec);
    std::vector<cplx> total(spec.data.size());
    auto lat = lattice(g);
    double mismatches = 0.0;
    for (std::size_t j = 0; j < spec.length; ++j) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double m = modulation(spec.sigma(j), lat->points[i].norm);
        int hits = 0;
        for (int l = 0; l <= top; ++l) hits += in_sharp_band(l, m);
        mismatches += hits != 1;
      }
    }
    for (int l = 0; l <= top; ++l) {
      const auto piece = modulation_cutoff(spec, l, true);
      for (std::size_t p = 0; p < total.size(); ++p) total[p] += piece.data[p];
    }
    for (std::size_t p = 0; p < total.size(); ++p) mismatches += total[p] != spec.data[p];
    out.push_back(below(suite, "sharp_partition", mismatches, 0.0));

    double worst = 0.0;
    for (int l = 0; l <= top; ++l) {
      const auto piece = inverse_spacetime_transform(modulation_cutoff(spec, l, true));
      double energy = 0.0;
      for (const auto& f : piece.frames) {
        for (const auto& c : f.coeffs) energy += std::norm(c);
      }
      if (energy == 0.0) continue;
      const auto bb = bernstein_bound(piece);
      worst = std::max(worst, bb.sup_norm / (bb.factor * bb.l2_norm));
    }
    out.push_back(below(suite, "bernstein", worst, 1.0 + 1e-12));
  }

  {
    std::uniform_real_distribution<double> time(-2.0, 2.0);
    double group = 0.0;
    double energy = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      StatePair s{random_vector(g, mmax, rng), random_vector(g, mmax, rng), 0.0};
      const double t1 = time(rng);
      const double t2 = time(rng);
      const auto split = free_evolution(free_evolution(s, t1), t2);
      const auto joint = free_evolution(s, t1 + t2);
      group = std::max(group, max_rel_state(split, joint));
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double before = mode_energy(s, i);
        if (before == 0.0) continue;
        energy = std::max(energy, std::abs(mode_energy(joint, i) - before) / before);
      }
    }
    out.push_back(below(suite, "group_law", group, d.tol_group_law));
    out.push_back(below(suite, "mode_energy", energy, d.tol_energy));
  }

  {
    double worst = 0.0;
    const double limit = std::numbers::pi / (2.0 * tau);
    for (int i = 1; i <= 1000; ++i) {
      const double x = limit * i / 1000.0;
      const double r = std::abs(dtau(x, tau)) / x;
      worst = std::max({worst, 2.0 / std::numbers::pi - r, r - 1.0});
    }
    out.push_back(below(suite, "dtau_bounds", std::max(worst, 0.0), 1e-15));
  }
  return out;
}

std::vector<CheckResult> vanishing_suite(const DiagnosticsConfig& d) {
  std::vector<CheckResult> out;
  for (const auto& name : d.vanishing_cases) {
    const auto c = vanishing_case_from_string(name);
    const auto rep = vanishing_check(c, default_scales(c), d.vanishing_trials, d.seed,
                                     default_lattice(c, false));
    out.push_back(below("vanishing", name, rep.max_ratio, d.tol_vanishing));
    if (!rep.hypotheses_hold) out.back().status = "fail";
    if (d.controls) {
      const auto ctl = vanishing_check(c, control_scales(c), d.control_trials, d.seed,
                                       default_lattice(c, true));
      CheckResult r{"vanishing", name + "_control", ctl.min_ratio, d.control_threshold, ""};
      r.status = ctl.min_ratio > d.control_threshold ? "expected-fail" : "unexpected-pass";
      out.push_back(r);
    }
  }
  return out;
}

std::pair<double, double> parse_exponents(const std::string& pq) {
  const auto comma = pq.find(',');
  if (comma == std::string::npos) throw ConfigError("exponent pair '" + pq + "' needs p,q");
  auto parse = [&](const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw ConfigError("bad exponent '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      throw ConfigError("bad exponent '" + s + "'");
    }
  };
  return {parse(pq.substr(0, comma)), parse(pq.substr(comma + 1))};
}

std::vector<CheckResult> strichartz_suite(const DiagnosticsConfig& d) {
  std::vector<CheckResult> out;
  StrichartzSetup setup;
  setup.seed = d.seed;
  for (const auto& pq : d.strichartz_pairs) {
    const auto [p, q] = parse_exponents(pq);
    const auto rep = strichartz_monitor(p, q, d.strichartz_k, d.strichartz_trials,
                                        d.strichartz_taus, setup);
    const double spread = rep.spread();
    std::string name = "spread_p" + pq;
    std::replace(name.begin(), name.end(), ',', 'q');
    out.push_back({"strichartz", name, spread, d.tol_strichartz_spread,
                   spread < d.tol_strichartz_spread ? "pass" : "fail"});
  }
  return out;
}

}  // namespace wm
