#include "blochsim/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blochsim/error.hpp"
#include "blochsim/special.hpp"

namespace blochsim {

namespace {

void require_force(const LatticeModel& model, const char* what) {
  if (model.force() == 0.0) throw Error(ErrorCode::no_oscillation, std::string(what) + ": F = 0");
}

int quadrature_points(std::int64_t max_shift, double spread) {
  const double need = 2.0 * (static_cast<double>(max_shift) + 2.0 * spread + 64.0);
  int n = 256;
  while (n < need) n *= 2;
  return n;
}

// Harmonic content of exp[(i/F) \int E] is bounded by this many orders.
double band_phase_spread(const LatticeModel& model) {
  return model.hopping_norm() * model.max_offset() / (std::abs(model.force()) * model.period());
}

void normalize_ws(ChainState& s, std::int64_t l) {
  const double nrm = std::sqrt(s.norm());
  if (!(nrm > 0.0) || !std::isfinite(nrm)) {
    throw Error(ErrorCode::numeric, "Wannier-Stark state has no weight on the window");
  }
  cplx anchor = s.at(l);
  if (std::abs(anchor) < 1e-300) {
    anchor = *std::max_element(s.amplitudes.begin(), s.amplitudes.end(),
                               [](cplx x, cplx y) { return std::abs(x) < std::abs(y); });
  }
  const cplx phase = std::abs(anchor) > 0.0 ? std::conj(anchor) / std::abs(anchor) : 1.0;
  for (auto& c : s.amplitudes) c *= phase / nrm;
}

// Toeplitz part u_m, m in [-max_m, max_m], of U_{n,l} = e^{-i F a n t} u_{n-l}.
std::vector<cplx> propagator_kernel(const LatticeModel& model, double t, std::int64_t max_m) {
  std::vector<cplx> u(static_cast<std::size_t>(2 * max_m + 1));
  const double force = model.force();
  const double a = model.period();
  const double fat = force * a * t;
  switch (model.kind()) {
    case ModelKind::hatano_nelson: {
      const auto& p = model.builtin();
      const double z = 4.0 * p.kappa / (force * a) * std::sin(0.5 * fat);
      BesselWorkspace ws(static_cast<int>(max_m));
      const auto j = ws.bessel_j(z);
      for (std::int64_t m = -max_m; m <= max_m; ++m) {
        const double jm = (m < 0 && (-m) % 2) ? -j[-m] : j[std::abs(m)];
        u[m + max_m] = jm * std::polar(std::exp(-p.mu * m), m * (fat - kPi) / 2.0);
      }
      return u;
    }
    case ModelKind::imaginary_hopping: {
      const auto& p = model.builtin();
      const double z = 4.0 * p.kappa / (force * a) * std::sin(0.5 * fat);
      BesselWorkspace ws(static_cast<int>(max_m));
      const auto iv = ws.bessel_i(z);
      for (std::int64_t m = -max_m; m <= max_m; ++m) {
        u[m + max_m] = iv[std::abs(m)] * std::polar(1.0, m * fat / 2.0);
      }
      return u;
    }
    case ModelKind::custom:
      break;
  }
  for (std::int64_t m = -max_m; m <= max_m; ++m) {
    u[m + max_m] = propagator_generic(m, 0, t, model) * std::polar(1.0, fat * m);
  }
  return u;
}

}  // namespace

double ws_energy(int l, const LatticeModel& model) {
  require_force(model, "ws_energy");
  return l * model.force() * model.period();
}

WannierStarkState ws_state_generic(int l, const LatticeModel& model, SiteWindow window) {
  require_force(model, "ws_state_generic");
  const double a = model.period();
  const double force = model.force();
  const std::int64_t max_shift =
      std::max(std::abs(window.n_min - l), std::abs(window.n_max - l));
  const int points = quadrature_points(max_shift, band_phase_spread(model));
  const double zone = 2.0 * kPi / a;

  std::vector<cplx> g(points);
  for (int j = 0; j < points; ++j) {
    const double q = zone * j / points;
    const cplx phase = model.band_integral(0.0, q) / force;
    g[j] = std::exp(cplx(-phase.imag(), phase.real()));
  }

  WannierStarkState out;
  out.l = l;
  out.energy = ws_energy(l, model);
  out.amplitudes.n_min = window.n_min;
  out.amplitudes.amplitudes.resize(window.size());
  for (std::int64_t n = window.n_min; n <= window.n_max; ++n) {
    int j = 0;
    const double shift = a * static_cast<double>(n - l);
    const cplx c = periodic_quadrature(
        [&](double q) { return g[j++] * std::polar(1.0, q * shift); }, zone, points);
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw Error(ErrorCode::numeric, "non-finite Wannier-Stark quadrature");
    }
    out.amplitudes.amplitudes[n - window.n_min] = c;
  }
  normalize_ws(out.amplitudes, l);
  return out;
}

WannierStarkState ws_state_hn(int l, double kappa, double mu, double force, double a,
                              SiteWindow window) {
  if (force == 0.0) throw Error(ErrorCode::no_oscillation, "ws_state_hn: F = 0");
  const double x = 2.0 * kappa / (force * a);
  const std::int64_t max_shift =
      std::max(std::abs(window.n_min - l), std::abs(window.n_max - l));
  BesselWorkspace ws(static_cast<int>(max_shift));
  const auto j = ws.bessel_j(x);

  WannierStarkState out;
  out.l = l;
  out.energy = l * force * a;
  out.amplitudes.n_min = window.n_min;
  out.amplitudes.amplitudes.resize(window.size());
  // The e^{-mu n} factor is taken relative to site l to keep it representable.
  for (std::int64_t n = window.n_min; n <= window.n_max; ++n) {
    const std::int64_t m = n - l;
    const double jm = (m < 0 && (-m) % 2) ? -j[-m] : j[std::abs(m)];
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    out.amplitudes.amplitudes[n - window.n_min] = sign * std::exp(-mu * m) * jm;
  }
  normalize_ws(out.amplitudes, l);
  return out;
}

ChainState apply_hamiltonian(const ChainState& state, const LatticeModel& model) {
  ChainState out = state;
  const auto n = static_cast<std::ptrdiff_t>(state.size());
  const double fa = model.force() * model.period();
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    out.amplitudes[k] = fa * static_cast<double>(state.n_min + k) * state.amplitudes[k];
  }
  for (const auto& h : model.hoppings()) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -h.offset);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n, n - h.offset);
    for (std::ptrdiff_t k = lo; k < hi; ++k) {
      out.amplitudes[k] += h.amplitude * state.amplitudes[k + h.offset];
    }
  }
  return out;
}

double ws_residual(const WannierStarkState& state, const LatticeModel& model) {
  const ChainState hc = apply_hamiltonian(state.amplitudes, model);
  double num = 0.0;
  for (std::size_t k = 0; k < hc.size(); ++k) {
    num += std::norm(hc.amplitudes[k] - state.energy * state.amplitudes.amplitudes[k]);
  }
  return std::sqrt(num / state.amplitudes.norm());
}

cplx propagator_generic(std::int64_t n, std::int64_t l, double t, const LatticeModel& model) {
  const double a = model.period();
  const double force = model.force();
  const double zone = 2.0 * kPi / a;
  const double reach = force != 0.0 ? std::min(std::abs(t), 2.0 / (std::abs(force) * a))
                                    : std::abs(t);
  const int points =
      quadrature_points(std::abs(n - l), model.hopping_norm() * model.max_offset() * reach);
  const double shift = a * static_cast<double>(n - l);
  const cplx integral = periodic_quadrature(
      [&](double q) {
        // -i \int_0^t E(q - F xi) d xi
        const cplx phase = force != 0.0 ? model.band_integral(q - force * t, q) / force
                                        : model.dispersion(q) * t;
        return std::exp(cplx(phase.imag(), -phase.real() + q * shift));
      },
      zone, points);
  if (!std::isfinite(integral.real()) || !std::isfinite(integral.imag())) {
    throw Error(ErrorCode::numeric, "non-finite propagator integrand");
  }
  return integral * (a / (2.0 * kPi)) *
         std::polar(1.0, -force * a * static_cast<double>(n) * t);
}

cplx propagator_hn(std::int64_t n, std::int64_t l, double t, double kappa, double mu,
                   double force, double a) {
  const double fat = force * a * t;
  const auto m = static_cast<double>(n - l);
  const double z = 4.0 * kappa / (force * a) * std::sin(0.5 * fat);
  const double j = bessel_j(static_cast<int>(n - l), z);
  return j * std::polar(1.0, -fat * static_cast<double>(n)) *
         std::polar(std::exp(-mu * m), m * (fat - kPi) / 2.0);
}

cplx propagator_imag(std::int64_t n, std::int64_t l, double t, double kappa, double force,
                     double a) {
  const double fat = force * a * t;
  const auto m = static_cast<double>(n - l);
  const double z = 4.0 * kappa / (force * a) * std::sin(0.5 * fat);
  return bessel_i(static_cast<int>(n - l), z) * std::polar(1.0, -fat * static_cast<double>(n)) *
         std::polar(1.0, m * fat / 2.0);
}

ChainState evolve_propagator(const ChainState& initial, const LatticeModel& model, double t) {
  if (t == 0.0) return initial;
  const auto size = static_cast<std::int64_t>(initial.size());
  const std::int64_t max_m = size - 1;
  std::vector<cplx> u;
  if (model.force() == 0.0 && model.kind() != ModelKind::custom) {
    // The closed forms divide by F; use the integral route for undriven runs.
    u.resize(static_cast<std::size_t>(2 * max_m + 1));
    for (std::int64_t m = -max_m; m <= max_m; ++m) u[m + max_m] = propagator_generic(m, 0, t, model);
  } else {
    u = propagator_kernel(model, t, max_m);
  }
  ChainState out = initial;
  const double fat = model.force() * model.period() * t;
  for (std::int64_t i = 0; i < size; ++i) {
    cplx acc{0.0, 0.0};
    for (std::int64_t k = 0; k < size; ++k) acc += u[i - k + max_m] * initial.amplitudes[k];
    out.amplitudes[i] = acc * std::polar(1.0, -fat * static_cast<double>(initial.n_min + i));
  }
  out.t = initial.t + t;
  return out;
}

ComplexOrbit::ComplexOrbit(const LatticeModel& model)
    : band_(model), force_(model.force()), period_(0.0) {
  require_force(model, "complex_orbit");
  period_ = model.bloch_period();
}

cplx ComplexOrbit::operator()(double t) const {
  return (band_(0.0) - band_(-force_ * t)) / force_;
}

ComplexOrbit complex_orbit(const LatticeModel& model) { return ComplexOrbit(model); }

double norm_factor(const LatticeModel& model, double t) {
  require_force(model, "norm_factor");
  const double force = model.force();
  return std::exp(2.0 / force * model.band_integral(-force * t, 0.0).imag());
}

double theta_correction(const MomentumSpectrum& initial, const LatticeModel& model, double t) {
  require_force(model, "theta_correction");
  const double force = model.force();
  const std::size_t n = initial.size();
  std::vector<double> logw(n);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    const double q = initial.q(j);
    const double p = std::norm(initial.values[j]);
    logw[j] = p > 0.0 ? std::log(p) + 2.0 / force * model.band_integral(q - force * t, q).imag()
                      : -std::numeric_limits<double>::infinity();
    peak = std::max(peak, logw[j]);
  }
  if (!std::isfinite(peak)) throw Error(ErrorCode::degenerate, "theta: zero spectral weight");
  double w0 = 0.0, q0 = 0.0, wt = 0.0, qt = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double q = initial.q(j);
    const double p = std::norm(initial.values[j]);
    const double w = std::exp(logw[j] - peak);
    w0 += p;
    q0 += q * p;
    wt += w;
    qt += q * w;
  }
  return qt / wt - q0 / w0;
}

std::vector<double> predicted_profile(const ProfileSpec& initial, const LatticeModel& model,
                                      double t, SiteWindow window) {
  const Profile profile(initial, window);
  const cplx x0 = ComplexOrbit(model)(t);
  const double g = norm_factor(model, t);
  const double a = model.period();
  std::vector<double> out(window.size());
  for (std::int64_t n = window.n_min; n <= window.n_max; ++n) {
    out[n - window.n_min] = g * std::norm(profile.at_complex(static_cast<double>(n) - x0 / a));
  }
  return out;
}

}  // namespace blochsim
