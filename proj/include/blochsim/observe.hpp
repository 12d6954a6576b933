#pragma once

#include <optional>
#include <span>
#include <vector>

#include "blochsim/model.hpp"
#include "blochsim/state.hpp"

namespace blochsim {

struct Observables {
  double t = 0.0;
  double norm = 0.0;
  double centroid_n = 0.0;
  /// sqrt(sum n^2 |c_n|^2 / sum |c_n|^2), second moment about site 0.
  double width = 0.0;
  /// Spread about the centroid; not the breathing width above.
  double width_centered = 0.0;
  /// <q>, unwrapped across zone boundaries, in units of 1/a.
  double centroid_q = 0.0;
  double theta_measured = 0.0;
  double boundary_fraction = 0.0;
};

double centroid_n(const ChainState& state);
double width(const ChainState& state);
double centered_width(const ChainState& state);

/// Spectral centroid in a zone centred on the spectral peak, unwrapped
/// against `prev_unwrapped` by the multiple of 2 pi / a minimizing the jump.
double momentum_centroid(const MomentumSpectrum& spectrum,
                         std::optional<double> prev_unwrapped = std::nullopt);

/// Observables per snapshot; all states must share a window.
std::vector<Observables> record(std::span<const ChainState> states, const LatticeModel& model,
                                int boundary_guard = 10);

/// Centroid of a sampled probability profile over a window.
double profile_centroid(std::span<const double> probabilities, SiteWindow window);

}  // namespace blochsim
