#pragma once

#include <vector>

#include "blochsim/model.hpp"
#include "blochsim/state.hpp"

namespace blochsim {

/// Wannier-Stark eigenstate on a window. Normalization: unit Euclidean norm
/// on the window, phase chosen so that C_l (or the largest entry, if l lies
/// outside the window) is real and non-negative.
struct WannierStarkState {
  int l = 0;
  double energy = 0.0;
  ChainState amplitudes;
};

/// epsilon_l = l F a.
double ws_energy(int l, const LatticeModel& model);

/// Eigenstate from the momentum-space integral
///   C_n ~ \oint dq exp[i q a (n - l) + (i/F) \int_0^q E],
/// evaluated with the periodic trapezoidal rule.
WannierStarkState ws_state_generic(int l, const LatticeModel& model, SiteWindow window);

/// Hatano-Nelson closed form C_n ~ e^{-mu n + i pi (n-l)} J_{n-l}(2 kappa / (F a)).
WannierStarkState ws_state_hn(int l, double kappa, double mu, double force, double a,
                              SiteWindow window);

/// H c with the hard-wall window convention (used for eigen-residuals).
ChainState apply_hamiltonian(const ChainState& state, const LatticeModel& model);

/// ||H C - eps C|| / ||C||.
double ws_residual(const WannierStarkState& state, const LatticeModel& model);

/// U_{n,l}(t) from the Brillouin-zone integral; valid for any hopping table.
cplx propagator_generic(std::int64_t n, std::int64_t l, double t, const LatticeModel& model);

cplx propagator_hn(std::int64_t n, std::int64_t l, double t, double kappa, double mu,
                   double force, double a);

cplx propagator_imag(std::int64_t n, std::int64_t l, double t, double kappa, double force,
                     double a);

/// c(t) = U(t) c(0) on the initial window. Uses the Bessel closed forms for
/// the built-in models and the Brillouin-zone integral otherwise.
ChainState evolve_propagator(const ChainState& initial, const LatticeModel& model, double t);

/// x0(t) = [E(0) - E(-F t)] / F, periodic with T_B.
class ComplexOrbit {
 public:
  explicit ComplexOrbit(const LatticeModel& model);

  cplx operator()(double t) const;
  double period() const { return period_; }

 private:
  Dispersion band_;
  double force_;
  double period_;
};

ComplexOrbit complex_orbit(const LatticeModel& model);

/// G(t) = exp[(2/F) \int_{-Ft}^0 E_I].
double norm_factor(const LatticeModel& model, double t);

/// Correction theta(t) to the drift <q(t)> = <q(0)> - F t + theta(t),
/// evaluated on the grid of the initial spectrum.
double theta_correction(const MomentumSpectrum& initial, const LatticeModel& model, double t);

/// First-order prediction G(t) |phi(n - x0(t)/a, 0)|^2 over the window.
std::vector<double> predicted_profile(const ProfileSpec& initial, const LatticeModel& model,
                                      double t, SiteWindow window);

}  // namespace blochsim
