#include "blochsim/observe.hpp"

#include <algorithm>
#include <cmath>

#include "blochsim/error.hpp"
#include "blochsim/evolve.hpp"

namespace blochsim {

namespace {

struct Moments {
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
};

Moments site_moments(const ChainState& s) {
  Moments m;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double n = static_cast<double>(s.n_min + static_cast<std::int64_t>(k));
    const double p = std::norm(s.amplitudes[k]);
    m.m0 += p;
    m.m1 += n * p;
    m.m2 += n * n * p;
  }
  if (!(m.m0 > 0.0)) throw Error(ErrorCode::degenerate, "state has zero norm");
  return m;
}

}  // namespace

double centroid_n(const ChainState& state) {
  const Moments m = site_moments(state);
  return m.m1 / m.m0;
}

double width(const ChainState& state) {
  const Moments m = site_moments(state);
  return std::sqrt(m.m2 / m.m0);
}

double centered_width(const ChainState& state) {
  const Moments m = site_moments(state);
  const double c = m.m1 / m.m0;
  return std::sqrt(std::max(0.0, m.m2 / m.m0 - c * c));
}

double momentum_centroid(const MomentumSpectrum& spectrum, std::optional<double> prev_unwrapped) {
  const std::size_t n = spectrum.size();
  const double zone = 2.0 * kPi / spectrum.a;
  std::size_t peak = 0;
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = std::norm(spectrum.values[j]);
    total += w;
    if (w > std::norm(spectrum.values[peak])) peak = j;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::degenerate, "spectrum has zero weight");

  // Frame [q_peak - pi/a, q_peak + pi/a).
  const double center = spectrum.q(peak);
  double moment = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double q = spectrum.q(j);
    q -= zone * std::floor((q - center + 0.5 * zone) / zone);
    moment += q * std::norm(spectrum.values[j]);
  }
  double value = moment / total;
  if (prev_unwrapped) {
    value += zone * std::round((*prev_unwrapped - value) / zone);
  } else {
    value -= zone * std::floor((value + 0.5 * zone) / zone);
  }
  return value;
}

std::vector<Observables> record(std::span<const ChainState> states, const LatticeModel& model,
                                int boundary_guard) {
  std::vector<Observables> rows;
  rows.reserve(states.size());
  std::optional<double> prev;
  double q0 = 0.0;
  for (const auto& s : states) {
    if (s.n_min != states.front().n_min || s.size() != states.front().size()) {
      throw Error(ErrorCode::invalid_parameter, "snapshots must share a window");
    }
    const Moments m = site_moments(s);
    Observables o;
    o.t = s.t;
    o.norm = m.m0;
    o.centroid_n = m.m1 / m.m0;
    o.width = std::sqrt(m.m2 / m.m0);
    o.width_centered = std::sqrt(std::max(0.0, m.m2 / m.m0 - o.centroid_n * o.centroid_n));
    o.centroid_q = momentum_centroid(to_spectrum(s, model.period()), prev);
    if (!prev) q0 = o.centroid_q + model.force() * s.t;
    prev = o.centroid_q;
    o.theta_measured = o.centroid_q + model.force() * s.t - q0;
    o.boundary_fraction = boundary_fraction(s, boundary_guard);
    rows.push_back(o);
  }
  return rows;
}

double profile_centroid(std::span<const double> probabilities, SiteWindow window) {
  double m0 = 0.0, m1 = 0.0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    m0 += probabilities[k];
    m1 += static_cast<double>(window.n_min + static_cast<std::int64_t>(k)) * probabilities[k];
  }
  if (!(m0 > 0.0)) throw Error(ErrorCode::degenerate, "profile has zero weight");
  return m1 / m0;
}

}  // namespace blochsim
