#include "blochsim/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <type_traits>

#include "blochsim/analytic.hpp"
#include "blochsim/error.hpp"
#include "ddouble.hpp"

namespace blochsim {

namespace {

void check_finite(const ChainState& s) {
  for (const auto& c : s.amplitudes) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw Error(ErrorCode::numeric, "non-finite amplitude in evolved state");
    }
  }
}

template <class R>
struct Cx {
  R re;
  R im;
};

double operator_norm_estimate(const LatticeModel& model, const ChainState& s) {
  const double edge = std::max(std::abs(static_cast<double>(s.n_min)),
                               std::abs(static_cast<double>(s.n_max())));
  return 2.0 * model.hopping_norm() + std::abs(model.force()) * model.period() * edge;
}

// Classical RK4 for dc/dt = -i H c with a hard wall; R is double or DD.
template <class R>
class Rk4Stepper {
 public:
  Rk4Stepper(const LatticeModel& model, const ChainState& s) : hoppings_(model.hoppings().begin(), model.hoppings().end()) {
    const std::size_t n = s.size();
    const R fa = R(model.force()) * model.period();
    onsite_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      onsite_[k] = fa * static_cast<double>(s.n_min + static_cast<std::int64_t>(k));
    }
    c_.resize(n);
    for (std::size_t k = 0; k < n; ++k) c_[k] = {R(s.amplitudes[k].real()), R(s.amplitudes[k].imag())};
    k1_.resize(n);
    k2_.resize(n);
    k3_.resize(n);
    k4_.resize(n);
    tmp_.resize(n);
  }

  void step(double dt) {
    const std::size_t n = c_.size();
    const R half = R(0.5 * dt);
    R sixth;
    if constexpr (std::is_same_v<R, detail::DD>) {
      sixth = detail::divide(dt, 6.0);
    } else {
      sixth = dt / 6.0;
    }
    rhs(c_, k1_);
    for (std::size_t k = 0; k < n; ++k) tmp_[k] = axpy(c_[k], half, k1_[k]);
    rhs(tmp_, k2_);
    for (std::size_t k = 0; k < n; ++k) tmp_[k] = axpy(c_[k], half, k2_[k]);
    rhs(tmp_, k3_);
    for (std::size_t k = 0; k < n; ++k) tmp_[k] = axpy(c_[k], R(dt), k3_[k]);
    rhs(tmp_, k4_);
    for (std::size_t k = 0; k < n; ++k) {
      const Cx<R> sum{k1_[k].re + (k2_[k].re + k3_[k].re) * 2.0 + k4_[k].re,
                      k1_[k].im + (k2_[k].im + k3_[k].im) * 2.0 + k4_[k].im};
      c_[k] = axpy(c_[k], sixth, sum);
    }
  }

  void store(std::vector<cplx>& out) const {
    out.resize(c_.size());
    for (std::size_t k = 0; k < c_.size(); ++k) out[k] = {to_double(c_[k].re), to_double(c_[k].im)};
  }

 private:
  static double to_double(double x) { return x; }
  static double to_double(const detail::DD& x) { return x.hi + x.lo; }

  static Cx<R> axpy(const Cx<R>& c, const R& h, const Cx<R>& k) {
    return {c.re + h * k.re, c.im + h * k.im};
  }

  // out = -i H c; sites outside the window are zero.
  void rhs(const std::vector<Cx<R>>& c, std::vector<Cx<R>>& out) const {
    const auto n = static_cast<std::ptrdiff_t>(c.size());
    for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = {onsite_[k] * c[k].re, onsite_[k] * c[k].im};
    for (const auto& h : hoppings_) {
      const double hr = h.amplitude.real(), hi = h.amplitude.imag();
      const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -h.offset);
      const std::ptrdiff_t up = std::min<std::ptrdiff_t>(n, n - h.offset);
      for (std::ptrdiff_t k = lo; k < up; ++k) {
        const Cx<R>& v = c[k + h.offset];
        if (hi == 0.0) {
          out[k].re = out[k].re + v.re * hr;
          out[k].im = out[k].im + v.im * hr;
        } else if (hr == 0.0) {
          out[k].re = out[k].re - v.im * hi;
          out[k].im = out[k].im + v.re * hi;
        } else {
          out[k].re = out[k].re + (v.re * hr - v.im * hi);
          out[k].im = out[k].im + (v.re * hi + v.im * hr);
        }
      }
    }
    for (auto& v : out) v = {v.im, -v.re};
  }

  std::vector<Hopping> hoppings_;
  std::vector<R> onsite_;
  std::vector<Cx<R>> c_, k1_, k2_, k3_, k4_, tmp_;
};

// Largest relative gain e^A one momentum component can pick up over another
// during the run. Rounding noise is amplified by up to this factor.
double gain_exponent(const LatticeModel& model, double duration) {
  if (model.is_hermitian()) return 0.0;
  constexpr int kPoints = 512;
  const double zone = 2.0 * kPi / model.period();
  if (model.force() == 0.0) {
    double lo = INFINITY, hi = -INFINITY;
    for (int j = 0; j < kPoints; ++j) {
      const double e = model.dispersion_imag(zone * j / kPoints);
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    return (hi - lo) * duration;
  }
  double lo = 0.0, hi = 0.0;
  for (int j = 1; j < kPoints; ++j) {
    const double p = model.band_integral(0.0, zone * j / kPoints).imag();
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  return 2.0 * (hi - lo) / std::abs(model.force());
}

// Integrates in double-double once double rounding would be amplified past ~1e-9.
class Rk4Integrator {
 public:
  Rk4Integrator(const LatticeModel& model, const ChainState& s, double horizon) {
    if (gain_exponent(model, horizon) > 15.0) {
      extended_.emplace(model, s);
    } else {
      plain_.emplace(model, s);
    }
  }

  void advance(double duration, double dt) {
    if (duration <= 0.0) return;
    const auto steps = static_cast<long>(std::ceil(duration / dt - 1e-9));
    const double h = duration / static_cast<double>(steps);
    for (long k = 0; k < steps; ++k) {
      if (extended_) {
        extended_->step(h);
      } else {
        plain_->step(h);
      }
    }
  }

  void store(std::vector<cplx>& out) const {
    if (extended_) {
      extended_->store(out);
    } else {
      plain_->store(out);
    }
  }

 private:
  std::optional<Rk4Stepper<double>> plain_;
  std::optional<Rk4Stepper<detail::DD>> extended_;
};

void check_step(const ChainState& s, const LatticeModel& model, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::step_size, "dt must be positive");
  }
  if (dt * operator_norm_estimate(model, s) >= 0.5) {
    throw Error(ErrorCode::step_size, "dt too large for the window: dt*|H| >= 0.5");
  }
}

}  // namespace

double default_step(const LatticeModel& model) {
  if (model.force() != 0.0) return model.bloch_period() / 20000.0;
  return 1e-3 / model.hopping_norm();
}

ChainState step_rk4(const ChainState& state, const LatticeModel& model, double dt) {
  check_step(state, model, dt);
  ChainState out = state;
  Rk4Stepper<double> stepper(model, state);
  stepper.step(dt);
  stepper.store(out.amplitudes);
  out.t = state.t + dt;
  return out;
}

ChainState evolve_rk4(const ChainState& state, const LatticeModel& model, double duration,
                      double dt) {
  ChainState out = state;
  if (duration <= 0.0) return out;
  const auto steps = static_cast<long>(std::ceil(duration / dt - 1e-9));
  const double h = duration / static_cast<double>(steps);
  check_step(state, model, h);
  Rk4Integrator rk(model, state, duration);
  rk.advance(duration, dt);
  rk.store(out.amplitudes);
  out.t = state.t + duration;
  check_finite(out);
  return out;
}

ChainState evolve_spectral(const ChainState& initial, const LatticeModel& model, double t) {
  if (t == 0.0) return initial;
  const double force = model.force();
  MomentumSpectrum spec;
  if (force != 0.0) {
    // S0(q + F t) is the transform of e^{-i F t n a} c_n: the shift is exact.
    spec = to_spectrum(momentum_shift(initial, force * t, model.period()), model.period());
    for (std::size_t j = 0; j < spec.size(); ++j) {
      const double q = spec.q(j);
      const cplx phase = model.band_integral(q, q + force * t) / force;
      spec.values[j] *= std::exp(cplx(phase.imag(), -phase.real()));
    }
  } else {
    spec = to_spectrum(initial, model.period());
    for (std::size_t j = 0; j < spec.size(); ++j) {
      const cplx e = model.dispersion(spec.q(j)) * t;
      spec.values[j] *= std::exp(cplx(e.imag(), -e.real()));
    }
  }
  ChainState out = from_spectrum(spec, initial.n_min);
  out.t = initial.t + t;
  check_finite(out);
  return out;
}

double boundary_fraction(const ChainState& state, int guard) {
  const double total = state.norm();
  if (!(total > 0.0)) return 0.0;
  const std::size_t n = state.size();
  const std::size_t g = std::min<std::size_t>(static_cast<std::size_t>(std::max(guard, 0)), n);
  double edge = 0.0;
  for (std::size_t k = 0; k < g; ++k) edge += std::norm(state.amplitudes[k]);
  for (std::size_t k = std::max(g, n - g); k < n; ++k) edge += std::norm(state.amplitudes[k]);
  return edge / total;
}

std::vector<ChainState> run(const ChainState& initial, const LatticeModel& model,
                            const EvolveSettings& settings, std::span<const double> t_grid) {
  if (t_grid.empty() || t_grid.front() != 0.0) {
    throw Error(ErrorCode::invalid_parameter, "time grid must start at 0");
  }
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
    throw Error(ErrorCode::invalid_parameter, "time grid must be ascending");
  }
  if (settings.boundary_guard < 0 || !(settings.boundary_tol > 0.0)) {
    throw Error(ErrorCode::invalid_parameter, "invalid boundary guard settings");
  }
  const double dt = settings.dt > 0.0 ? settings.dt : default_step(model);

  std::vector<ChainState> snaps;
  snaps.reserve(t_grid.size());
  std::optional<Rk4Integrator> rk;
  double t_prev = 0.0;
  if (settings.method == Method::rk4) {
    check_step(initial, model, dt);
    rk.emplace(model, initial, t_grid.back());
  }
  for (double t : t_grid) {
    switch (settings.method) {
      case Method::rk4:
        rk->advance(t - t_prev, dt);
        t_prev = t;
        snaps.push_back(initial);
        rk->store(snaps.back().amplitudes);
        snaps.back().t = t;
        check_finite(snaps.back());
        break;
      case Method::spectral:
        snaps.push_back(evolve_spectral(initial, model, t));
        snaps.back().t = t;
        break;
      case Method::propagator:
        snaps.push_back(evolve_propagator(initial, model, t));
        snaps.back().t = t;
        break;
    }
    const double frac = boundary_fraction(snaps.back(), settings.boundary_guard);
    if (frac >= settings.boundary_tol) throw WindowTooSmall(t, frac);
  }
  return snaps;
}

}  // namespace blochsim
