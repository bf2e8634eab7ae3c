#include "wavemaps/bourgain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "wavemaps/fft.hpp"

// Which scales each case reads. All bands are open supports of the smooth
// cutoffs: P_0, Q_0 -> |x| < 1, P_k, Q_k -> 2^{k-2} < |x| < 2^k, and
// P_{<=k}, Q_{<=k} -> |x| < 2^k.
//
//   geom4   Q_l(P_{<=j} phi * Q_{<=r} w)          j, r <= l-10
//   geom5   Q_l(P_{<=j} phi * Q_r w)              r >= l+10, j <= r-10
//   claim2  Q_l(Q_{<=j}P_k1 u * Q_{<=j}P_k2 v)    l >= k2+10, k1 >= k2+10, j <= l-10
//   claim1  Q_l(Q_{<=j}P_k1 u * Q_{<=j}P_k2 v)    k2 <= k1 <= k2+10, l >= k1+10, j <= l-10
//   claim3  Q_r(Q_j P_k1 u * Q_l P_k2 v)          j >= max(r,k1,k2)+10, |j-l| >= 10
//   claim4  Q_l(Q_r P_k1 u * Q_j P_k2 v)          k2 >= k1+10, j >= k1+10, l, r <= j-10
//
// phi in geom4/geom5 depends on time only; P_{<=j} acts on its time frequency.

namespace wm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// {x : lo < |x| < hi}; lo < 0 admits x = 0.
struct Band {
  double lo = -1.0;
  double hi = kInf;
  bool contains(double x) const {
    const double a = std::abs(x);
    return (lo < 0.0 ? true : a > lo) && a < hi;
  }
};

Band below(int k) { return {-1.0, std::ldexp(1.0, k)}; }
Band block(int k) {
  if (k < 0) return {0.0, 0.0};
  if (k == 0) return {-1.0, 1.0};
  return {std::ldexp(1.0, k - 2), std::ldexp(1.0, k)};
}

struct Region {
  Band xi;
  Band t;                   // on the modulation, or on sigma when time_only
  bool time_only = false;

  bool contains(double sigma, double xi_value) const {
    if (!xi.contains(xi_value)) return false;
    return time_only ? t.contains(sigma) : t.contains(modulation(sigma, std::abs(xi_value)));
  }
};

struct Setup {
  Region u;
  Region v;
  Band forbidden;
};

Setup setup_for(VanishingCase which, const VanishingScales& s) {
  const Band zero{-1.0, 1e-9};
  switch (which) {
    case VanishingCase::geom4:
      return {{zero, below(s.j), true}, {Band{}, below(s.r), false}, block(s.l)};
    case VanishingCase::geom5:
      return {{zero, below(s.j), true}, {Band{}, block(s.r), false}, block(s.l)};
    case VanishingCase::claim2:
    case VanishingCase::claim1:
      return {{block(s.k1), below(s.j), false}, {block(s.k2), below(s.j), false}, block(s.l)};
    case VanishingCase::claim3:
      return {{block(s.k1), block(s.j), false}, {block(s.k2), block(s.l), false}, block(s.r)};
    case VanishingCase::claim4:
      return {{block(s.k1), block(s.r), false}, {block(s.k2), block(s.j), false}, block(s.l)};
  }
  throw ValidationError("unknown vanishing case");
}

struct Grid2 {
  std::size_t m;
  std::size_t n;
  double delta;
  double sigma(std::size_t j) const { return delta * signed_index(j, m); }
  double xi(std::size_t i) const { return delta * signed_index(i, n); }
  static double signed_index(std::size_t i, std::size_t len) {
    const auto a = static_cast<long>(i);
    const auto l = static_cast<long>(len);
    return static_cast<double>(a < l / 2 ? a : a - l);
  }
};

std::vector<std::size_t> support(const Region& r, const Grid2& g) {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < g.m; ++j) {
    for (std::size_t i = 0; i < g.n; ++i) {
      if (r.contains(g.sigma(j), g.xi(i))) idx.push_back(j * g.n + i);
    }
  }
  return idx;
}

double max_abs_xi(const std::vector<std::size_t>& idx, const Grid2& g) {
  double out = 0.0;
  for (auto p : idx) out = std::max(out, std::abs(g.xi(p % g.n)));
  return out;
}

}  // namespace

std::string to_string(VanishingCase c) {
  switch (c) {
    case VanishingCase::geom4: return "geom4";
    case VanishingCase::geom5: return "geom5";
    case VanishingCase::claim2: return "claim2";
    case VanishingCase::claim1: return "claim1";
    case VanishingCase::claim3: return "claim3";
    case VanishingCase::claim4: return "claim4";
  }
  return "?";
}

VanishingCase vanishing_case_from_string(const std::string& s) {
  for (auto c : all_vanishing_cases()) {
    if (to_string(c) == s) return c;
  }
  throw ValidationError("unknown vanishing case '" + s + "'");
}

std::vector<VanishingCase> all_vanishing_cases() {
  return {VanishingCase::geom4, VanishingCase::geom5, VanishingCase::claim2,
          VanishingCase::claim1, VanishingCase::claim3, VanishingCase::claim4};
}

VanishingScales default_scales(VanishingCase c) {
  switch (c) {
    case VanishingCase::geom4: return {.l = 10, .r = 0, .j = 0, .k1 = 0, .k2 = 0};
    case VanishingCase::geom5: return {.l = 0, .r = 10, .j = 0, .k1 = 0, .k2 = 0};
    case VanishingCase::claim2: return {.l = 10, .r = 0, .j = 0, .k1 = 10, .k2 = 0};
    case VanishingCase::claim1: return {.l = 10, .r = 0, .j = 0, .k1 = 0, .k2 = 0};
    case VanishingCase::claim3: return {.l = 0, .r = 0, .j = 10, .k1 = 0, .k2 = 0};
    case VanishingCase::claim4: return {.l = 0, .r = 0, .j = 10, .k1 = 0, .k2 = 10};
  }
  return {};
}

VanishingScales control_scales(VanishingCase c) {
  auto s = default_scales(c);
  switch (c) {
    case VanishingCase::geom4: s.j = s.l; break;
    case VanishingCase::geom5: s.j = s.r; break;
    case VanishingCase::claim2: s.k1 = 9; s.k2 = 8; break;
    case VanishingCase::claim1: s.k1 = 8; s.k2 = 8; break;
    case VanishingCase::claim3: s.r = s.j; break;
    case VanishingCase::claim4: s.l = s.j; break;
  }
  return s;
}

VanishingLattice default_lattice(VanishingCase c, bool control) {
  VanishingLattice lat;
  const bool wide = c == VanishingCase::claim2 || c == VanishingCase::claim4 ||
                    (control && c == VanishingCase::claim1);
  lat.n_space = wide ? 2048 : 64;
  return lat;
}

std::optional<std::string> violated_hypothesis(VanishingCase which,
                                               const VanishingScales& s) {
  auto fail = [](const char* what) { return std::optional<std::string>(what); };
  switch (which) {
    case VanishingCase::geom4:
      if (s.j > s.l - 10) return fail("j <= l-10");
      if (s.r > s.l - 10) return fail("r <= l-10");
      break;
    case VanishingCase::geom5:
      if (s.r < s.l + 10) return fail("r >= l+10");
      if (s.j > s.r - 10) return fail("j <= r-10");
      break;
    case VanishingCase::claim2:
      if (s.l < s.k2 + 10) return fail("l >= k2+10");
      if (s.k1 < s.k2 + 10) return fail("k1 >= k2+10");
      if (s.j > s.l - 10) return fail("j <= l-10");
      break;
    case VanishingCase::claim1:
      if (s.k1 < s.k2 || s.k1 > s.k2 + 10) return fail("k2 <= k1 <= k2+10");
      if (s.l < s.k1 + 10) return fail("l >= k1+10");
      if (s.j > s.l - 10) return fail("j <= l-10");
      break;
    case VanishingCase::claim3:
      if (s.j < std::max({s.r, s.k1, s.k2}) + 10) return fail("j >= max(r,k1,k2)+10");
      if (std::abs(s.j - s.l) < 10) return fail("|j-l| >= 10");
      break;
    case VanishingCase::claim4:
      if (s.k2 < s.k1 + 10) return fail("k2 >= k1+10");
      if (s.j < s.k1 + 10) return fail("j >= k1+10");
      if (s.l > s.j - 10) return fail("l <= j-10");
      if (s.r > s.j - 10) return fail("r <= j-10");
      break;
  }
  return std::nullopt;
}

VanishingReport vanishing_check(VanishingCase which, const VanishingScales& scales,
                                std::size_t trials, std::uint64_t seed,
                                const VanishingLattice& lat) {
  if (trials == 0) throw ValidationError("vanishing_check: trials must be >= 1");
  if (lat.n_time < 4 || lat.n_space < 4 || !(lat.delta > 0.0)) {
    throw ValidationError("vanishing_check: lattice too small");
  }
  const Grid2 g{lat.n_time, lat.n_space, lat.delta};
  Setup st = setup_for(which, scales);

  // Keep |xi_u| + |xi_v| representable so the spatial product cannot alias.
  const double room = (static_cast<double>(g.n / 2) - 1.0) * g.delta;
  st.u.xi.hi = std::min(st.u.xi.hi, room + 0.25 * g.delta);
  st.v.xi.hi = std::min(st.v.xi.hi, room + 0.25 * g.delta);
  auto su = support(st.u, g);
  auto sv = support(st.v, g);
  if (su.empty() || sv.empty()) {
    throw ValidationError("vanishing_check(" + to_string(which) +
                          "): input support is empty on this lattice");
  }
  double mu = max_abs_xi(su, g);
  double mv = max_abs_xi(sv, g);
  if (mu + mv > room) {
    if (mu >= mv) {
      st.u.xi.hi = room - mv + 0.25 * g.delta;
      su = support(st.u, g);
    } else {
      st.v.xi.hi = room - mu + 0.25 * g.delta;
      sv = support(st.v, g);
    }
    if (su.empty() || sv.empty()) {
      throw ValidationError("vanishing_check(" + to_string(which) +
                            "): supports cannot be separated from spatial aliasing;"
                            " use a larger n_space");
    }
  }

  std::vector<std::size_t> banned;
  for (std::size_t j = 0; j < g.m; ++j) {
    for (std::size_t i = 0; i < g.n; ++i) {
      if (st.forbidden.contains(modulation(g.sigma(j), std::abs(g.xi(i))))) {
        banned.push_back(j * g.n + i);
      }
    }
  }
  if (banned.empty()) {
    throw ValidationError("vanishing_check(" + to_string(which) +
                          "): forbidden band has no lattice points");
  }

  VanishingReport rep;
  rep.which = which;
  rep.scales = scales;
  rep.lattice = lat;
  rep.seed = seed;
  if (auto bad = violated_hypothesis(which, scales)) {
    rep.hypotheses_hold = false;
    rep.violated = *bad;
  }
  rep.control = !rep.hypotheses_hold;

  const std::vector<int> shape{static_cast<int>(g.m), static_cast<int>(g.n)};
  const std::size_t total = g.m * g.n;
  std::vector<cplx> a(total);
  std::vector<cplx> b(total);
  rep.min_ratio = kInf;
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + t + 1);
    std::normal_distribution<double> gauss;
    VanishingTrial tr;
    std::fill(a.begin(), a.end(), cplx{});
    std::fill(b.begin(), b.end(), cplx{});
    for (auto p : su) {
      a[p] = {gauss(rng), gauss(rng)};
      tr.input_mass_u += std::norm(a[p]);
    }
    for (auto p : sv) {
      b[p] = {gauss(rng), gauss(rng)};
      tr.input_mass_v += std::norm(b[p]);
    }
    fft::transform(a, shape, fft::Direction::backward);
    fft::transform(b, shape, fft::Direction::backward);
    for (std::size_t p = 0; p < total; ++p) a[p] *= b[p];
    fft::transform(a, shape, fft::Direction::forward);
    const double norm = 1.0 / static_cast<double>(total);
    for (auto p : banned) tr.forbidden_mass += std::norm(a[p] * norm);
    tr.ratio = tr.forbidden_mass / (tr.input_mass_u * tr.input_mass_v);
    rep.max_ratio = std::max(rep.max_ratio, tr.ratio);
    rep.min_ratio = std::min(rep.min_ratio, tr.ratio);
    rep.trials.push_back(tr);
  }
  return rep;
}

}  // namespace wm
