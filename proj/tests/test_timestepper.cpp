#include <doctest.h>

#include <cmath>
#include <limits>

#include "support.hpp"
#include "wavemaps/harness.hpp"
#include "wavemaps/refsol.hpp"
#include "wavemaps/timestepper.hpp"

using namespace wm;
using wmtest::index_of;

namespace {

SchemeParams params(const GridSpec& g, double tau, double t_end, double c = 1.0) {
  SchemeParams p;
  p.grid = g;
  p.tau = tau;
  p.t_end = t_end;
  p.filter_constant = c;
  return p;
}

Field cosine_level(const GridSpec& g, long m, double amp) {
  Field f(g);
  f[0].coeffs[index_of(g, m)] = 0.5 * amp;
  f[0].coeffs[index_of(g, -m)] = 0.5 * amp;
  return f;
}

History smooth_history(const GridSpec& g, double tau, std::uint64_t seed) {
  const Field a = wmtest::random_field(g, static_cast<long>(g.n_per_axis / 4) - 1, seed, 1.0);
  const Field b = wmtest::random_field(g, static_cast<long>(g.n_per_axis / 4) - 1, seed + 1, 1.0);
  auto level = [&](double j) { return a - (j * tau) * b; };
  return History::of(level(2.0), level(1.0), level(0.0));
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("scheme validation") {
  const GridSpec g{1, 1024, 20.0};
  CHECK_NOTHROW(params(g, 0.0078125, 0.5).validate());
  CHECK_THROWS_AS(params(g, 0.0, 0.5).validate(), ValidationError);
  CHECK_THROWS_AS(params(g, 1.0, 0.5).validate(), ValidationError);
  CHECK_THROWS_AS(params(g, 0.3, 0.5).validate(), ValidationError);  // not a divisor
  CHECK_THROWS_AS(params(g, 1e-5, 0.5).validate(), ValidationError);  // band past 2/3 Nyquist
  auto p = params(g, 0.0078125, 0.5);
  p.activation_steps = 1;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  CHECK(params(g, 0.0078125, 0.5).steps() == 64);
}

TEST_CASE("history ring keeps the newest three levels") {
  const GridSpec g{1, 8, 20.0};
  History h;
  CHECK_THROWS_AS(h.now(), ValidationError);
  for (int j = 0; j < 5; ++j) {
    Field f(g);
    f[0].coeffs[0] = static_cast<double>(j);
    h.push(f);
  }
  CHECK(h.full());
  CHECK(h.now()[0].coeffs[0] == cplx(4.0));
  CHECK(h.prev()[0].coeffs[0] == cplx(3.0));
  CHECK(h.prev2()[0].coeffs[0] == cplx(2.0));
  History partial;
  partial.push(Field(g));
  CHECK_THROWS_AS(box_tau(partial, 0.1), ValidationError);
}

TEST_CASE("box_tau of a constant history vanishes") {
  const GridSpec g{1, 16, 20.0};
  const Field c = constant_map(g, {0.0, 0.6, 0.8}).u;
  const auto b = box_tau(History::of(c, c, c), 0.1);
  CHECK(wmtest::max_abs(b) == 0.0);
}

TEST_CASE("box_tau on the cosine mode sequence") {
  const GridSpec g{1, 64, 20.0};
  const long m = 3;
  const double k = m * g.dk();
  for (double tau : {0.1, 0.05, 0.025}) {
    const std::size_t n = 7;
    auto a = [&](std::size_t j) { return std::cos(static_cast<double>(j) * tau * k); };
    const History h = History::of(cosine_level(g, m, a(n - 2)), cosine_level(g, m, a(n - 1)),
                                  cosine_level(g, m, a(n)));
    const auto b = box_tau(h, tau);
    const double expect =
        (a(n) - 2.0 * a(n - 1) + a(n - 2)) / (tau * tau) + k * k * a(n);
    CHECK(std::abs(b[0].coeffs[index_of(g, m)] - 0.5 * expect) < 1e-12);
    // Backward stencil: first-order residual on the exact sequence.
    CHECK(std::abs(expect) <= tau * std::pow(k, 3) + tau * tau * std::pow(k, 4));
  }
}

TEST_CASE("finite differences") {
  const GridSpec g{1, 16, 20.0};
  const Field a = wmtest::random_field(g, 7, 3);
  CHECK(wmtest::max_abs(finite_diff(a, a, 1, 0.1)) == 0.0);
  const Field c = wmtest::random_field(g, 7, 4);
  const double tau = 0.125;
  const Field u3 = (3.0 * tau) * c;
  const Field u1 = (1.0 * tau) * c;
  CHECK(wmtest::max_diff(finite_diff(u3, u1, 2, tau), c) < 1e-14);
  CHECK_THROWS_AS(finite_diff(a, a, 0, 0.1), ValidationError);

  const long m = 2;
  const double k = m * g.dk();
  const Field now = cosine_level(g, m, std::cos(5 * tau * k));
  const Field prev = cosine_level(g, m, std::cos(4 * tau * k));
  const double expect = (std::cos(5 * tau * k) - std::cos(4 * tau * k)) / tau;
  CHECK(std::abs(finite_diff(now, prev, 1, tau)[0].coeffs[index_of(g, m)] - 0.5 * expect) <
        1e-12);
}

TEST_CASE("box_tau and finite_diff are linear") {
  const GridSpec g{1, 32, 20.0};
  const auto h1 = smooth_history(g, 0.1, 10);
  const auto h2 = smooth_history(g, 0.1, 20);
  const History sum = History::of(h1.prev2() + 2.0 * h2.prev2(), h1.prev() + 2.0 * h2.prev(),
                                  h1.now() + 2.0 * h2.now());
  const Field lhs = box_tau(sum, 0.1);
  const Field rhs = box_tau(h1, 0.1) + 2.0 * box_tau(h2, 0.1);
  CHECK(wmtest::max_diff(lhs, rhs) < 1e-12 * wmtest::max_abs(rhs));
  const Field d = finite_diff(h1.now() + h2.now(), h1.prev() + h2.prev(), 1, 0.1);
  const Field e = finite_diff(h1.now(), h1.prev(), 1, 0.1) + finite_diff(h2.now(), h2.prev(), 1, 0.1);
  CHECK(wmtest::max_diff(d, e) < 1e-12 * wmtest::max_abs(e));
}

TEST_CASE("discrete null-structure identity on random histories") {
  const GridSpec g{1, 128, 20.0};
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto gh = smooth_history(g, 0.05, seed);
    const auto hh = smooth_history(g, 0.05, seed + 50);
    const auto lhs = null_bracket(gh, hh, 0.05);
    const auto rhs = null_expansion(gh, hh, 0.05);
    std::vector<double> diff(lhs.size());
    for (std::size_t i = 0; i < lhs.size(); ++i) diff[i] = lhs[i] - rhs[i];
    CHECK(max_abs(diff) < 1e-10);
    CHECK(max_abs(rhs) > 1e-3);
  }
}

TEST_CASE("trilinear operator vanishes on constants") {
  const GridSpec g{1, 32, 20.0};
  const Field f = wmtest::random_field(g, 10, 5);
  const Field c1 = constant_map(g, {1.0, 0.0, 0.0}).u;
  const Field c2 = constant_map(g, {0.0, 0.6, 0.8}).u;
  const History g1 = History::of(c1, c1, c1);
  const History h1 = History::of(c2, c2, c2);
  CHECK(wmtest::max_abs(trilinear_T(f, g1, h1, 0.1)) < 1e-14);
  CHECK(wmtest::max_abs(trilinear_T(c2, h1, h1, 0.1)) < 1e-14);
}

TEST_CASE("trilinear operator matches the expansion times -f") {
  const GridSpec g{1, 64, 20.0};
  const auto gh = smooth_history(g, 0.05, 7);
  const auto hh = smooth_history(g, 0.05, 8);
  const Field f = wmtest::random_field(g, 15, 9);
  const auto t = to_physical(trilinear_T(f, gh, hh, 0.05));
  const auto e = null_expansion(gh, hh, 0.05);
  const auto pf = to_physical(f);
  double err = 0.0;
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t x = 0; x < g.size(); ++x) err = std::max(err, std::abs(t[a][x] + pf[a][x] * e[x]));
  }
  CHECK(err < 1e-9);
}

TEST_CASE("nonlinearity of a constant map is zero") {
  const GridSpec g{1, 64, 20.0};
  const Field c = constant_map(g, {0.0, 0.0, 1.0}).u;
  const auto p = params(g, 0.01, 0.1);
  CHECK(wmtest::max_abs(nonlinearity_tau(History::of(c, c, c), p)) < 1e-14);
}

TEST_CASE("nonlinearity of a single cosine mode matches the hand expansion") {
  const GridSpec g{1, 64, 20.0};
  const long m = 2;
  const double k = m * g.dk();
  const double tau = 0.01;
  const double a0 = 0.9, a1 = 0.8, a2 = 0.75;
  const History h = History::of(cosine_level(g, m, a2), cosine_level(g, m, a1), cosine_level(g, m, a0));
  // Filter constant small enough that Pi is the identity on |k| <= 3 * 2 dk.
  const auto p = params(g, tau, 0.1, 0.05);
  const auto n = to_physical(nonlinearity_tau(h, p));
  double err = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = sample_point(g, i)[0];
    const double c = std::cos(k * x);
    const double c2 = std::cos(2.0 * k * x);
    const double box_uu = (a0 * a0 - 2 * a1 * a1 + a2 * a2) / (tau * tau) * 0.5 * (1.0 + c2) +
                          4.0 * k * k * a0 * a0 * 0.5 * c2;
    const double box_u = ((a0 - 2 * a1 + a2) / (tau * tau) + k * k * a0) * c;
    const double bracket = box_uu - 2.0 * a0 * c * box_u;
    const double expect = 0.5 * (-a0 * c * bracket);
    err = std::max(err, std::abs(n[0][i] - expect));
    scale = std::max(scale, std::abs(expect));
    CHECK(std::abs(n[1][i]) < 1e-12);
  }
  CHECK(err < 1e-10 * std::max(1.0, scale));
}

TEST_CASE("nonlinearity approaches the continuous one on a geodesic history") {
  const GridSpec g{1, 1024, 20.0};
  const auto d = gaussian_geodesic(g, 1.0, 1.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double tau : {0.01, 0.005, 0.0025}) {
    const double t = 0.2;
    const auto s0 = geodesic_state(d, t);
    const History h = History::of(geodesic_state(d, t - 2 * tau).u,
                                  geodesic_state(d, t - tau).u, s0.u);
    auto p = params(g, tau, 10 * tau, 0.05);
    const Field discrete = nonlinearity_tau(h, p);
    // Continuous -u(|u_t|^2 - |grad u|^2), computed in physical space.
    const auto u = to_physical(s0.u);
    const auto v = to_physical(s0.v);
    Field ux;
    for (std::size_t a = 0; a < 3; ++a) ux[a] = derivative(s0.u[a], 0);
    const auto gx = to_physical(ux);
    PhysicalField cont;
    for (std::size_t a = 0; a < 3; ++a) {
      cont[a].resize(g.size());
      for (std::size_t x = 0; x < g.size(); ++x) {
        double w = 0.0;
        for (std::size_t b = 0; b < 3; ++b) w += v[b][x] * v[b][x] - gx[b][x] * gx[b][x];
        cont[a][x] = -u[a][x] * w;
      }
    }
    const Field diff = discrete - filter_pi(to_spectral(cont, g), tau, 0.05);
    const double err = sobolev_norm(diff, 0.0);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("activation: the first two steps are free flight bit for bit") {
  const GridSpec g{1, 64, 20.0};
  const auto d = gaussian_geodesic(g);
  StatePair s = geodesic_state(d, 0.0);
  const auto p = params(g, 0.01, 0.1);
  History h;
  for (std::size_t n = 0; n < 2; ++n) {
    h.push(s.u);
    const auto a = lie_step(s, h, n, p);
    const auto b = free_evolution(s, p.tau);
    CHECK(wmtest::max_diff(a.u, b.u) == 0.0);
    CHECK(wmtest::max_diff(a.v, b.v) == 0.0);
    s = a;
  }
  StatePair wrong = s;
  wrong.time = 1.0;
  CHECK_THROWS_AS(lie_step(wrong, h, 2, p), ValidationError);
}

TEST_CASE("constant map is a fixed point of the scheme") {
  const GridSpec g{1, 64, 20.0};
  const auto s0 = constant_map(g, {0.0, 0.6, 0.8});
  const auto traj = evolve(s0, params(g, 0.05, 0.5));
  CHECK(wmtest::max_diff(traj.final_state.u, s0.u) < 1e-15);
  CHECK(wmtest::max_abs(traj.final_state.v) < 1e-15);
  CHECK(traj.steps == 10);
  CHECK(traj.final_state.time == doctest::Approx(0.5));
}

TEST_CASE("t_end = 0 returns the projected initial state") {
  const GridSpec g{1, 256, 20.0};
  const auto s0 = geodesic_state(gaussian_geodesic(g), 0.0);
  const auto traj = evolve(s0, params(g, 0.01, 0.0));
  CHECK(traj.steps == 0);
  CHECK(wmtest::max_diff(traj.final_state.u, filter_pi(s0.u, 0.01, 1.0)) == 0.0);
}

TEST_CASE("evolve rejects a state not at time zero") {
  const GridSpec g{1, 64, 20.0};
  auto s0 = constant_map(g, {1.0, 0.0, 0.0});
  s0.time = 0.1;
  CHECK_THROWS_AS(evolve(s0, params(g, 0.01, 0.1)), ValidationError);
}

TEST_CASE("reversibility of the free part") {
  const GridSpec g{1, 128, 20.0};
  const auto s0 = geodesic_state(gaussian_geodesic(g), 0.0);
  auto p = params(g, 0.01, 0.4);
  p.null_form_scale = 0.0;
  const auto traj = evolve(s0, p);
  const auto back = free_evolution(traj.final_state, -0.4);
  const Field pu = filter_pi(s0.u, 0.01, 1.0);
  CHECK(wmtest::max_diff(back.u, pu) < 1e-11);
  CHECK(wmtest::max_diff(back.v, filter_pi(s0.v, 0.01, 1.0)) < 1e-11);
}

TEST_CASE("frequency confinement outside the filter support") {
  const GridSpec g{1, 256, 20.0};
  const double tau = 0.01;
  const auto s0 = geodesic_state(gaussian_geodesic(g), 0.0);
  const auto traj = evolve(s0, params(g, tau, 0.2));
  auto lat = lattice(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (filter_symbol(lat->points[i].norm, tau, 1.0) == 0.0) {
      for (std::size_t a = 0; a < 3; ++a) {
        CHECK(traj.final_state.u[a].coeffs[i] == cplx(0.0));
        CHECK(traj.final_state.v[a].coeffs[i] == cplx(0.0));
      }
    }
  }
}

TEST_CASE("halving tau reduces the error against the exact geodesic") {
  const GridSpec g{1, 1024, 20.0};
  const auto d = gaussian_geodesic(g);
  const auto exact = geodesic_state(d, 0.5);
  const auto s0 = geodesic_state(d, 0.0);
  const auto coarse = evolve(s0, params(g, 1.0 / 128, 0.5)).final_state;
  const auto fine = evolve(s0, params(g, 1.0 / 256, 0.5)).final_state;
  const auto ec = state_error(coarse, exact, 0.0);
  const auto ef = state_error(fine, exact, 0.0);
  CHECK(std::isfinite(ec.first + ec.second));
  CHECK(ef.first + ef.second < ec.first + ec.second);
  CHECK(sphere_deviation(fine) < sphere_deviation(coarse));
}

TEST_CASE("observers and snapshots") {
  const GridSpec g{1, 64, 20.0};
  const auto s0 = constant_map(g, {1.0, 0.0, 0.0});
  std::vector<std::size_t> seen;
  EvolveOptions opts;
  opts.observers.push_back([&](std::size_t n, const StatePair&) { seen.push_back(n); });
  opts.snapshot_every = 4;
  const auto traj = evolve(s0, params(g, 0.05, 0.5), opts);
  CHECK(seen.size() == 11);
  CHECK(seen.front() == 0);
  CHECK(seen.back() == 10);
  CHECK(traj.snapshots.size() == 2);
  CHECK(traj.snapshots[1].time == doctest::Approx(0.4));
}

TEST_CASE("blow-up is reported with the step index") {
  const GridSpec g{1, 256, 20.0};
  const auto s0 = geodesic_state(gaussian_geodesic(g, 2.0, 0.5), 0.0);
  auto p = params(g, 0.01, 0.5);
  p.null_form_scale = 1e150;
  try {
    evolve(s0, p);
    FAIL("expected blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.step() >= 3);
    CHECK(e.step() <= 50);
  }
}

TEST_CASE("sphere deviation examples") {
  const GridSpec g{1, 128, 20.0};
  const auto s = geodesic_state(gaussian_geodesic(g), 0.0);
  CHECK(sphere_deviation(s) < 1e-12);
  StatePair big = s;
  big.u *= 1.1;
  CHECK(sphere_deviation(big) == doctest::Approx(0.1).epsilon(1e-10));
}

TEST_CASE("output-only filtering agrees with literal filtering inside the band") {
  const GridSpec g{1, 64, 20.0};
  const long m = 1;
  const History h = History::of(cosine_level(g, m, 0.5), cosine_level(g, m, 0.52),
                                cosine_level(g, m, 0.55));
  auto p = params(g, 0.01, 0.1, 0.05);
  const Field a = nonlinearity_tau(h, p);
  p.filter_mode = FilterMode::output_only;
  const Field b = nonlinearity_tau(h, p);
  CHECK(wmtest::max_diff(a, b) < 1e-12 * wmtest::max_abs(a));
  CHECK(filter_mode_from_string("output_only") == FilterMode::output_only);
  CHECK_THROWS_AS(filter_mode_from_string("sometimes"), ValidationError);
}
