#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wavemaps/spectral.hpp"

namespace wm {

/// Frames u_n at times n*tau, n = 0..M-1. The time direction is periodic
/// with period M*tau for transform purposes.
struct SpacetimeSequence {
  double tau = 0.1;
  std::vector<ScalarField> frames;

  std::size_t length() const { return frames.size(); }
  const GridSpec& grid() const { return frames.front().grid; }
};

/// Semidiscrete transform tau * sum_n c_n(k) e^{-i n tau sigma_j}.
///
/// sigma_j = 2*pi*j/(M tau), j in FFT order over {-floor(M/2), ...}, which
/// covers [-pi/tau, pi/tau). data[j * grid.size() + i] pairs sigma_j with
/// spatial lattice point i.
struct SpacetimeSpectrum {
  GridSpec grid;
  double tau = 0.1;
  std::size_t length = 0;
  std::vector<cplx> data;

  double sigma(std::size_t j) const;
  double dsigma() const;
  /// L^dim dsigma / (2 pi): converts sum |F|^2 into the l^2_tau L^2 norm squared.
  double parseval_weight() const;
};

/// (e^{i x tau} - 1) / tau.
cplx dtau(double x, double tau);

SpacetimeSpectrum spacetime_transform(const SpacetimeSequence& seq);
SpacetimeSequence inverse_spacetime_transform(const SpacetimeSpectrum& spec);

/// (tau sum_n ||u_n||_{L^2}^2)^{1/2} from physical samples.
double l2_tau_norm(const SpacetimeSequence& seq);

enum class BourgainWeight {
  literal,    // <d(|sigma|+|xi|)>^s <d(|sigma|-|xi|)>^b
  surrogate,  // <|d(sigma)| + |d(|xi|)|>^s <d(|sigma|-|xi|)>^b
};

struct BourgainWeights {
  double s = 0.0;
  double b = 0.0;
  double tau = 0.1;
  BourgainWeight kind = BourgainWeight::literal;

  double operator()(double sigma, double xi_norm) const;
};

/// Weighted l^2 norm of the transform. With s = b = 0 it equals l2_tau_norm.
/// Throws ValidationError if a frame carries energy at |xi| > pi/(2 tau).
double bourgain_norm(const SpacetimeSequence& seq, double s, double b,
                     BourgainWeight kind = BourgainWeight::literal);

/// Modulation of the point (sigma, xi): |sigma| - |xi|.
inline double modulation(double sigma, double xi_norm) {
  return std::abs(sigma) - xi_norm;
}

/// Sharp band: |m| <= 1 for l = 0, 2^{l-1} < |m| <= 2^l for l >= 1.
bool in_sharp_band(int l, double m);
/// Smooth modulation symbol phi_l(|m|), phi_0 = chi.
double modulation_symbol(int l, double m);

/// Restricts a spectrum to modulation band l.
SpacetimeSpectrum modulation_cutoff(const SpacetimeSpectrum& spec, int l, bool sharp);
SpacetimeSequence modulation_cutoff(const SpacetimeSequence& seq, int l, bool sharp);
/// Smallest L such that the sharp bands 0..L cover every lattice modulation.
int max_modulation_band(const SpacetimeSpectrum& spec);

/// Box_tau computed framewise with periodic indexing versus the symbol
/// (|xi|^2 + d_tau(-sigma)^2). Returns max |difference| / max |symbol side|.
double box_symbol_check(const SpacetimeSequence& seq, double tau);

/// Both sides of the exact modulation Bernstein count for a sequence.
struct BernsteinBound {
  double sup_norm = 0.0;       // max_n ||u_n||_{L^2}
  double l2_norm = 0.0;        // ||u||_{l^2_tau L^2}
  std::size_t max_count = 0;   // max over xi of #sigma points carrying energy
  double factor = 0.0;         // sqrt(max_count * dsigma / (2 pi))
  bool holds() const { return sup_norm <= factor * l2_norm * (1.0 + 1e-12); }
};
BernsteinBound bernstein_bound(const SpacetimeSequence& seq);

// ---------------------------------------------------------------------------
// Geometric vanishing of modulation paraproducts.

enum class VanishingCase { geom4, geom5, claim2, claim1, claim3, claim4 };

std::string to_string(VanishingCase c);
VanishingCase vanishing_case_from_string(const std::string& s);
std::vector<VanishingCase> all_vanishing_cases();

/// Dyadic parameters; which ones a case reads is documented per case in
/// vanishing.cpp. Unused entries are ignored.
struct VanishingScales {
  int l = 10;
  int r = 0;
  int j = 10;
  int k1 = 0;
  int k2 = 0;
};

/// The scales each case ships with: hypotheses satisfied on the default lattice.
VanishingScales default_scales(VanishingCase c);
/// Scales that break one hypothesis and should leave forbidden mass.
VanishingScales control_scales(VanishingCase c);

/// Square spacetime lattice: n_time x n_space points (1D space), spacing
/// delta in both sigma and xi.
struct VanishingLattice {
  std::size_t n_time = 2048;
  std::size_t n_space = 2048;
  double delta = 0.5;
};

VanishingLattice default_lattice(VanishingCase c, bool control);

struct VanishingTrial {
  double input_mass_u = 0.0;
  double input_mass_v = 0.0;
  double forbidden_mass = 0.0;
  double ratio = 0.0;  // forbidden / (mass_u * mass_v)
};

struct VanishingReport {
  VanishingCase which = VanishingCase::geom4;
  VanishingScales scales;
  VanishingLattice lattice;
  bool control = false;
  std::uint64_t seed = 0;
  std::vector<VanishingTrial> trials;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  bool hypotheses_hold = true;  // false when scales violate the lemma
  std::string violated;         // which hypothesis, when hypotheses_hold is false
};

/// Builds random sequences with sharp support in the hypothesized regions,
/// multiplies them in physical space and measures the spectral mass of the
/// product inside the forbidden band. Throws ValidationError when the
/// supports are empty on the lattice or would alias spatially.
VanishingReport vanishing_check(VanishingCase which, const VanishingScales& scales,
                                std::size_t trials, std::uint64_t seed,
                                const VanishingLattice& lattice);

/// Checks the lemma hypotheses; returns the violated one, if any.
std::optional<std::string> violated_hypothesis(VanishingCase which,
                                               const VanishingScales& s);

// ---------------------------------------------------------------------------
// Strichartz monitoring.

struct StrichartzLevel {
  double tau = 0.0;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
};

struct StrichartzReport {
  double p = 4.0;
  double q = 4.0;
  int k = 3;
  double gamma = 0.0;
  std::vector<StrichartzLevel> levels;
  /// max over levels of max_ratio divided by min over levels of max_ratio.
  double spread() const;
};

struct StrichartzSetup {
  GridSpec grid{3, 32, 2.0 * std::numbers::pi};
  double window = 1.0;  // ratio evaluated over n tau in [0, window)
  int sign = 1;
  std::uint64_t seed = 0;
};

/// gamma = dim/2 - 1/p - dim/q.
double strichartz_gamma(double p, double q, int dim);

/// ||P_k e^{i sign n tau |grad|} f||_{l^p_tau L^q} / ||P_k f||_{Hdot^gamma}.
double strichartz_ratio(const ScalarField& f, double p, double q, int k, double tau,
                        const StrichartzSetup& setup);

/// Requires 2 < p <= inf, 2 <= q < inf, 1/p + 1/q <= 1/2.
StrichartzReport strichartz_monitor(double p, double q, int k, std::size_t trials,
                                    const std::vector<double>& taus,
                                    const StrichartzSetup& setup = {});

}  // namespace wm
