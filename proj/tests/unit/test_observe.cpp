#include "doctest.h"

#include <cmath>
#include <vector>

#include "blochsim/analytic.hpp"
#include "blochsim/commands.hpp"
#include "blochsim/error.hpp"
#include "blochsim/evolve.hpp"
#include "blochsim/observe.hpp"
#include "blochsim/scenario.hpp"

using namespace blochsim;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected blochsim::Error");
  return ErrorCode::numeric;
}

ChainState site(std::int64_t at, std::int64_t half = 10) {
  ChainState s;
  s.n_min = -half;
  s.amplitudes.assign(static_cast<std::size_t>(2 * half + 1), 0.0);
  s.amplitudes[static_cast<std::size_t>(at + half)] = cplx(0.0, 2.0);
  return s;
}

ScenarioConfig scenario(const std::string& name) {
  return load_scenario(std::string(BLOCHSIM_SCENARIO_DIR) + "/" + name);
}

const ScenarioResult& fig2() {
  static const ScenarioResult r = simulate(scenario("fig2.json"));
  return r;
}

const ScenarioResult& fig3() {
  static const ScenarioResult r = simulate(scenario("fig3.json"));
  return r;
}

const ScenarioResult& fig6() {
  static const ScenarioResult r = simulate(scenario("fig6.json"));
  return r;
}

}  // namespace

TEST_CASE("centroid and widths of simple states") {
  CHECK(centroid_n(site(5)) == doctest::Approx(5.0));
  CHECK(width(site(0)) == 0.0);
  CHECK(width(site(3)) == doctest::Approx(3.0));
  CHECK(width(site(-3)) == doctest::Approx(3.0));
  CHECK(centered_width(site(3)) == doctest::Approx(0.0));

  ChainState pair = site(0);
  pair.amplitudes[10 - 4] = 1.0;
  pair.amplitudes[10 + 4] = 1.0;
  pair.amplitudes[10] = 0.0;
  CHECK(centroid_n(pair) == 0.0);
  CHECK(width(pair) == doctest::Approx(4.0));
  CHECK(centered_width(pair) == doctest::Approx(4.0));

  ChainState zero = site(0);
  zero.amplitudes.assign(zero.size(), 0.0);
  CHECK(code_of([&] { centroid_n(zero); }) == ErrorCode::degenerate);
  CHECK(code_of([&] { width(zero); }) == ErrorCode::degenerate);
}

TEST_CASE("momentum centroid") {
  ProfileSpec g;
  const auto c0 = build_state(g, {-131, 131});
  CHECK(std::abs(momentum_centroid(to_spectrum(c0))) < 1e-14);

  SUBCASE("packets straddling the zone edge") {
    // a packet centred at q = pi sits across the wrap of the fixed zone
    const auto spec = to_spectrum(momentum_shift(c0, -kPi));
    const double q = momentum_centroid(spec);
    CHECK(std::abs(std::abs(q) - kPi) < 1e-9);
    CHECK(momentum_centroid(spec, 3.0) == doctest::Approx(kPi).epsilon(1e-9));
    CHECK(momentum_centroid(spec, -3.0) == doctest::Approx(-kPi).epsilon(1e-9));
  }
  SUBCASE("unwrapping picks the nearest branch") {
    const auto spec = to_spectrum(momentum_shift(c0, 0.5));
    const double q = momentum_centroid(spec);
    CHECK(q == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(momentum_centroid(spec, -2.0 * kPi) == doctest::Approx(-0.5 - 2.0 * kPi).epsilon(1e-9));
    CHECK(momentum_centroid(spec, 4.0 * kPi) == doctest::Approx(-0.5 + 4.0 * kPi).epsilon(1e-9));
  }
  SUBCASE("zero spectrum") {
    MomentumSpectrum zero;
    zero.values.assign(8, 0.0);
    CHECK(code_of([&] { momentum_centroid(zero); }) == ErrorCode::degenerate);
  }
}

TEST_CASE("record on a single snapshot") {
  ProfileSpec g;
  const std::vector<ChainState> one{build_state(g, {-131, 131})};
  const auto rows = record(one, make_hatano_nelson(1.0, 0.1, 1.0, 0.2));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].theta_measured == 0.0);
  CHECK(rows[0].norm == doctest::Approx(1.0));
  CHECK(rows[0].boundary_fraction < 1e-20);
}

TEST_CASE("record rejects mixed windows") {
  ProfileSpec g;
  const std::vector<ChainState> two{build_state(g, {-50, 50}), build_state(g, {-51, 50})};
  CHECK(code_of([&] { record(two, make_hatano_nelson(1.0, 0.1, 1.0, 0.2)); }) == ErrorCode::invalid_parameter);
}

TEST_CASE("Hatano-Nelson gaussian trajectory") {
  const auto& r = fig2();
  const auto& obs = r.observables;
  REQUIRE(obs.size() == 256);
  const double tb = r.model.bloch_period();
  const auto x = complex_orbit(r.model);
  double peak = 0.0;
  for (const auto& o : obs) peak = std::max(peak, o.centroid_n);
  CHECK(std::abs(peak - 4.0 * std::cosh(0.1) / 0.2) < 0.5);
  CHECK(obs.back().t == doctest::Approx(tb));
  CHECK(std::abs(obs.back().centroid_n - obs.front().centroid_n) < 1e-4);
  CHECK(std::abs(x(0.5 * tb).real() - 4.0 * std::cosh(0.1) / 0.2) < 1e-12);

  SUBCASE("measured theta equals the analytic correction") {
    const auto s0 = to_spectrum(r.states.front(), r.model.period());
    double worst = 0.0;
    for (const auto& o : obs) worst = std::max(worst, std::abs(o.theta_measured - theta_correction(s0, r.model, o.t)));
    CHECK(worst < 1e-6 * kPi);
    CHECK(std::abs(obs.back().theta_measured) < 1e-8);
  }
  SUBCASE("unwrapped momentum never jumps by more than half a zone") {
    for (std::size_t i = 1; i < obs.size(); ++i) CHECK(std::abs(obs[i].centroid_q - obs[i - 1].centroid_q) < kPi);
    CHECK(obs.back().centroid_q == doctest::Approx(obs.front().centroid_q - 2.0 * kPi).epsilon(1e-8));
  }
}

TEST_CASE("Hermitian acceleration theorem") {
  const auto& r = fig3();
  double worst = 0.0, worst_theta = 0.0;
  for (const auto& o : r.observables) {
    worst = std::max(worst, std::abs(o.centroid_q - (r.observables.front().centroid_q - 0.2 * o.t)));
    worst_theta = std::max(worst_theta, std::abs(o.theta_measured));
  }
  CHECK(worst < 1e-10);
  CHECK(worst_theta < 1e-10);
}

TEST_CASE("imaginary hopping breathes in place") {
  const auto& r = fig6();
  double worst_centroid = 0.0, widest = 0.0, worst_mirror = 0.0;
  for (const auto& o : r.observables) {
    worst_centroid = std::max(worst_centroid, std::abs(o.centroid_n));
    widest = std::max(widest, o.width);
  }
  for (const auto& s : r.states) {
    double peak = 0.0, diff = 0.0;
    for (std::int64_t n = 0; n <= s.n_max(); ++n) {
      peak = std::max(peak, std::abs(s.at(n)));
      diff = std::max(diff, std::abs(std::abs(s.at(n)) - std::abs(s.at(-n))));
    }
    worst_mirror = std::max(worst_mirror, diff / peak);
  }
  CHECK(worst_centroid < 1e-8);
  CHECK(worst_mirror < 1e-10);
  const auto& first = r.observables.front();
  const auto& last = r.observables.back();
  CHECK(widest > 1.2 * first.width);
  CHECK(std::abs(last.width - first.width) < 1e-4);
}

TEST_CASE("profile centroid") {
  const std::vector<double> p{0.0, 1.0, 0.0, 3.0};
  CHECK(profile_centroid(p, {-1, 2}) == doctest::Approx(1.5));
  const std::vector<double> z(4, 0.0);
  CHECK(code_of([&] { profile_centroid(z, {-1, 2}); }) == ErrorCode::degenerate);
}

// First-order norm law for the gaussian packet.
TEST_SUITE("known-gap") {
  TEST_CASE("gaussian norm follows the shifted-profile law to 1%") {
    const auto& r = fig2();
    const auto times = time_grid(r.model.bloch_period(), 256);
    const auto rows = predict_trajectory(r.resolved, times);
    REQUIRE(rows.size() == r.observables.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double measured = r.observables[i].norm / r.observables.front().norm;
      worst = std::max(worst, std::abs(measured / rows[i].norm_ratio - 1.0));
    }
    CHECK(worst < 0.01);
  }
}
