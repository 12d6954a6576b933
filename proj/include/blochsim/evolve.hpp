#pragma once

#include <span>
#include <vector>

#include "blochsim/model.hpp"
#include "blochsim/state.hpp"

namespace blochsim {

enum class Method { rk4, spectral, propagator };

struct EvolveSettings {
  Method method = Method::rk4;
  /// RK4 step; 0 selects T_B / 20000.
  double dt = 0.0;
  /// Width (sites) of each edge strip watched by the boundary guard.
  int boundary_guard = 10;
  /// Largest allowed edge-strip share of the total probability.
  double boundary_tol = 1e-10;
};

/// Default RK4 step: T_B / 20000, or a hopping-scaled step when F = 0.
double default_step(const LatticeModel& model);

/// dc/dt = -i (sum_l kappa_l c_{n+l} + n F a c_n) on a hard-walled window.
ChainState step_rk4(const ChainState& state, const LatticeModel& model, double dt);

/// Integrates to state.t + duration with equal steps no longer than dt.
ChainState evolve_rk4(const ChainState& state, const LatticeModel& model, double duration,
                      double dt);

/// Exact momentum-space solution S(q,t) = S0(q+Ft) exp[-(i/F) int_q^{q+Ft} E],
/// mapped back on the window's periodic grid.
ChainState evolve_spectral(const ChainState& initial, const LatticeModel& model, double t);

/// Probability share of the outer `guard` sites on each edge.
double boundary_fraction(const ChainState& state, int guard);

/// Snapshots at each time in t_grid (ascending, starting at 0).
std::vector<ChainState> run(const ChainState& initial, const LatticeModel& model,
                            const EvolveSettings& settings, std::span<const double> t_grid);

}  // namespace blochsim
