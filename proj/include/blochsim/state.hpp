#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "blochsim/model.hpp"

namespace blochsim {

/// Inclusive range of absolute site indices [n_min, n_max].
struct SiteWindow {
  std::int64_t n_min = 0;
  std::int64_t n_max = 0;

  std::size_t size() const { return static_cast<std::size_t>(n_max - n_min + 1); }
};

/// Site amplitudes c_n on a finite window at time t.
struct ChainState {
  std::int64_t n_min = 0;
  std::vector<cplx> amplitudes;
  double t = 0.0;

  std::size_t size() const { return amplitudes.size(); }
  std::int64_t n_max() const { return n_min + static_cast<std::int64_t>(amplitudes.size()) - 1; }
  SiteWindow window() const { return {n_min, n_max()}; }
  /// Amplitude at absolute site n; zero outside the window.
  cplx at(std::int64_t n) const;
  double norm() const;
};

/// S(q_j) = sum_n c_n exp(-i q_j n a) on q_j = -pi/a + 2 pi j / (N a).
struct MomentumSpectrum {
  std::vector<cplx> values;
  double a = 1.0;

  std::size_t size() const { return values.size(); }
  double q(std::size_t j) const;
};

enum class ProfileKind { gaussian, two_humped, single_site, custom_samples };

struct ProfileSpec {
  ProfileKind kind = ProfileKind::gaussian;
  double gamma = 0.02;  // gaussian: exp(-gamma (n - center)^2)
  double alpha = 0.02;  // two-humped: 1 / cosh^2((alpha + i beta)(n - center))
  double beta = 0.04;
  double center = 0.0;  // single_site uses round(center)
  bool normalize = true;
  std::int64_t samples_n_min = 0;  // custom_samples
  std::vector<cplx> samples;
};

/// A profile bound to a window: fixes the normalization constant shared by
/// site sampling and the analytic continuation.
class Profile {
 public:
  Profile(ProfileSpec spec, SiteWindow window);

  const ProfileSpec& spec() const { return spec_; }
  SiteWindow window() const { return window_; }
  double scale() const { return scale_; }

  cplx sample(std::int64_t n) const;
  /// Closed-form continuation phi(z) for complex z (gaussian, two-humped).
  cplx at_complex(cplx z) const;
  ChainState build() const;

 private:
  cplx raw(cplx z) const;

  ProfileSpec spec_;
  SiteWindow window_;
  double scale_ = 1.0;
};

ChainState build_state(const ProfileSpec& profile, SiteWindow window);
cplx profile_at_complex(const ProfileSpec& profile, SiteWindow window, cplx z);

MomentumSpectrum to_spectrum(const ChainState& state, double a = 1.0);
ChainState from_spectrum(const MomentumSpectrum& spectrum, std::int64_t n_min);

/// Returns e^{-i shift n a} c_n, i.e. the state whose spectrum is S(q + shift).
ChainState momentum_shift(const ChainState& state, double shift, double a = 1.0);

}  // namespace blochsim
