#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "wavemaps/propagator.hpp"

namespace wm {

/// Where the frequency filter is applied inside the discrete nonlinearity.
enum class FilterMode {
  literal,      // every factor and the output, as the scheme is written
  output_only,  // output only; the iterates already live in the filter band
};

std::string to_string(FilterMode m);
FilterMode filter_mode_from_string(const std::string& s);

struct SchemeParams {
  double tau = 1.0 / 64.0;
  double t_end = 0.5;
  double filter_constant = 100.0;
  int activation_steps = 2;
  GridSpec grid;
  FilterMode filter_mode = FilterMode::literal;
  // Scale of the discrete null form. 1/2 makes the bracket consistent with
  // |u_t|^2 - |grad u|^2; 1 is the bracket without the factor.
  double null_form_scale = 0.5;

  /// Rejects tau outside (0,1), t_end not a multiple of tau, and filter
  /// bands wider than 2/3 of the Nyquist wavenumber.
  void validate() const;
  std::size_t steps() const;
};

/// First components at steps n, n-1, n-2 (newest first).
class History {
 public:
  History() = default;
  static History of(const Field& u_prev2, const Field& u_prev, const Field& u_now);

  /// Makes u the newest entry, dropping the oldest.
  void push(const Field& u);

  bool full() const { return count_ >= 3; }
  std::size_t depth() const { return count_ < 3 ? count_ : 3; }
  const Field& now() const { return level(0); }
  const Field& prev() const { return level(1); }
  const Field& prev2() const { return level(2); }

  /// Same history with f applied to every level.
  template <class F>
  History map(F&& f) const {
    History out;
    for (std::size_t i = depth(); i-- > 0;) out.push(f(level(i)));
    return out;
  }

 private:
  const Field& level(std::size_t age) const;

  std::array<Field, 3> ring_;
  std::size_t head_ = 0;  // index of newest
  std::size_t count_ = 0;
};

/// (u_n - 2u_{n-1} + u_{n-2})/tau^2 - Laplacian u_n.
Field box_tau(const History& h, double tau);
/// Scalar variant on three levels (newest first).
ScalarField box_tau(const ScalarField& now, const ScalarField& prev,
                    const ScalarField& prev2, double tau);

/// (u_k - u_{k-m}) / (m tau).
Field finite_diff(const Field& u_k, const Field& u_km, int m, double tau);

/// Box(g.h)_n - g_n.Box h_n - h_n.Box g_n in physical space.
std::vector<double> null_bracket(const History& g, const History& h, double tau);

/// The same bracket written through difference quotients:
/// 2(D g_n.D h_{n-1} - grad g_n.grad h_n) - 2 D g_n.D_2 h_n + 2 D g_{n-1}.D_2 h_n.
std::vector<double> null_expansion(const History& g, const History& h, double tau);

/// -f_n (Box(g.h)_n - g_n.Box h_n - h_n.Box g_n), products in physical space.
Field trilinear_T(const Field& f, const History& g, const History& h, double tau);

/// Velocity increment of the discrete null-form nonlinearity for history h.
Field nonlinearity_tau(const History& h, const SchemeParams& p);

/// One step: free flight for n < activation_steps, otherwise an Euler
/// substep on the velocity followed by free flight.
StatePair lie_step(const StatePair& s, const History& h, std::size_t n,
                   const SchemeParams& p);

using Observer = std::function<void(std::size_t, const StatePair&)>;

struct EvolveOptions {
  std::vector<Observer> observers;
  std::size_t snapshot_every = 0;  // 0: no intermediate snapshots
};

struct Trajectory {
  StatePair final_state;
  std::vector<StatePair> snapshots;
  std::size_t steps = 0;
  FilterCensus census;
};

/// Filters s0 and advances it floor(t_end/tau) steps. Throws BlowUpError
/// naming the step when the state becomes non-finite.
Trajectory evolve(const StatePair& s0, const SchemeParams& p,
                  const EvolveOptions& opts = {});

/// max_x | |u(x)| - 1 |.
double sphere_deviation(const StatePair& s);

// Physical-space helpers shared with the reference solvers.
using PhysicalField = std::array<std::vector<double>, 3>;
PhysicalField to_physical(const Field& f);
Field to_spectral(const PhysicalField& f, const GridSpec& grid);
std::vector<double> dot(const PhysicalField& a, const PhysicalField& b);

}  // namespace wm
