#include "blochsim/state.hpp"

#include <cmath>

#include "blochsim/error.hpp"
#include "fft.hpp"

namespace blochsim {

namespace {

// Phase e^{-2 pi i j m / N} with the product reduced exactly in integers.
cplx unit_root(std::int64_t j, std::int64_t m, std::int64_t n) {
  std::int64_t r = (j % n) * (((m % n) + n) % n) % n;
  return std::polar(1.0, -2.0 * kPi * static_cast<double>(r) / static_cast<double>(n));
}

double parity(std::int64_t n) { return (n % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

cplx ChainState::at(std::int64_t n) const {
  if (n < n_min || n > n_max()) return {};
  return amplitudes[static_cast<std::size_t>(n - n_min)];
}

double ChainState::norm() const {
  double s = 0.0;
  for (const auto& c : amplitudes) s += std::norm(c);
  return s;
}

double MomentumSpectrum::q(std::size_t j) const {
  return (-kPi + 2.0 * kPi * static_cast<double>(j) / static_cast<double>(values.size())) / a;
}

Profile::Profile(ProfileSpec spec, SiteWindow window)
    : spec_(std::move(spec)), window_(window) {
  if (window.n_max < window.n_min) {
    throw Error(ErrorCode::invalid_parameter, "empty site window");
  }
  switch (spec_.kind) {
    case ProfileKind::gaussian:
      if (!(spec_.gamma > 0.0)) throw Error(ErrorCode::invalid_profile, "gamma must be positive");
      break;
    case ProfileKind::two_humped:
      if (!std::isfinite(spec_.alpha) || !std::isfinite(spec_.beta)) {
        throw Error(ErrorCode::invalid_profile, "alpha, beta must be finite");
      }
      for (std::int64_t n = window.n_min; n <= window.n_max; ++n) {
        const cplx arg = cplx(spec_.alpha, spec_.beta) * (static_cast<double>(n) - spec_.center);
        if (std::abs(std::cosh(arg)) < 1e-12) {
          throw Error(ErrorCode::invalid_profile,
                      "two-humped profile has a pole at site " + std::to_string(n));
        }
      }
      break;
    case ProfileKind::single_site:
      break;
    case ProfileKind::custom_samples:
      if (spec_.samples.empty()) throw Error(ErrorCode::invalid_profile, "no custom samples");
      break;
  }
  if (spec_.normalize) {
    double s = 0.0;
    for (std::int64_t n = window.n_min; n <= window.n_max; ++n) s += std::norm(sample(n));
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw Error(ErrorCode::invalid_profile, "profile has no weight on the window");
    }
    scale_ = 1.0 / std::sqrt(s);
  }
}

cplx Profile::raw(cplx z) const {
  const cplx x = z - spec_.center;
  switch (spec_.kind) {
    case ProfileKind::gaussian:
      return std::exp(-spec_.gamma * x * x);
    case ProfileKind::two_humped: {
      const cplx c = std::cosh(cplx(spec_.alpha, spec_.beta) * x);
      if (std::abs(c) < 1e-12) throw Error(ErrorCode::singularity, "two-humped profile pole");
      return 1.0 / (c * c);
    }
    default:
      throw Error(ErrorCode::unsupported_continuation,
                  "profile has no closed-form continuation");
  }
}

cplx Profile::sample(std::int64_t n) const {
  switch (spec_.kind) {
    case ProfileKind::single_site:
      return n == static_cast<std::int64_t>(std::llround(spec_.center)) ? scale_ : 0.0;
    case ProfileKind::custom_samples: {
      const std::int64_t k = n - spec_.samples_n_min;
      if (k < 0 || k >= static_cast<std::int64_t>(spec_.samples.size())) return {};
      return scale_ * spec_.samples[static_cast<std::size_t>(k)];
    }
    default:
      return scale_ * raw(cplx(static_cast<double>(n), 0.0));
  }
}

cplx Profile::at_complex(cplx z) const { return scale_ * raw(z); }

ChainState Profile::build() const {
  ChainState s;
  s.n_min = window_.n_min;
  s.t = 0.0;
  s.amplitudes.resize(window_.size());
  for (std::size_t k = 0; k < s.amplitudes.size(); ++k) {
    s.amplitudes[k] = sample(window_.n_min + static_cast<std::int64_t>(k));
  }
  return s;
}

ChainState build_state(const ProfileSpec& profile, SiteWindow window) {
  return Profile(profile, window).build();
}

cplx profile_at_complex(const ProfileSpec& profile, SiteWindow window, cplx z) {
  return Profile(profile, window).at_complex(z);
}

MomentumSpectrum to_spectrum(const ChainState& state, double a) {
  // e^{-i q_j n a} = (-1)^n e^{-2 pi i j n / N}; split n = n_min + m.
  const auto n = static_cast<std::int64_t>(state.size());
  MomentumSpectrum out;
  out.a = a;
  out.values.resize(state.size());
  for (std::int64_t m = 0; m < n; ++m) {
    out.values[m] = parity(state.n_min + m) * state.amplitudes[m];
  }
  detail::dft_inplace(out.values, -1);
  for (std::int64_t j = 0; j < n; ++j) out.values[j] *= unit_root(j, state.n_min, n);
  return out;
}

ChainState from_spectrum(const MomentumSpectrum& spectrum, std::int64_t n_min) {
  const auto n = static_cast<std::int64_t>(spectrum.size());
  ChainState out;
  out.n_min = n_min;
  out.amplitudes.resize(spectrum.size());
  for (std::int64_t j = 0; j < n; ++j) {
    out.amplitudes[j] = spectrum.values[j] * std::conj(unit_root(j, n_min, n));
  }
  detail::dft_inplace(out.amplitudes, +1);
  const double inv = 1.0 / static_cast<double>(n);
  for (std::int64_t m = 0; m < n; ++m) out.amplitudes[m] *= parity(n_min + m) * inv;
  return out;
}

ChainState momentum_shift(const ChainState& state, double shift, double a) {
  ChainState out = state;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double n = static_cast<double>(state.n_min + static_cast<std::int64_t>(k));
    out.amplitudes[k] *= std::polar(1.0, -shift * n * a);
  }
  return out;
}

}  // namespace blochsim
