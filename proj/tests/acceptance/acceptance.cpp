// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [N]   (no argument runs all criteria)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "blochsim/analytic.hpp"
#include "blochsim/commands.hpp"
#include "blochsim/evolve.hpp"
#include "blochsim/observe.hpp"
#include "blochsim/scenario.hpp"
#include "blochsim/special.hpp"

using namespace blochsim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ScenarioConfig scenario(const std::string& name) {
  return load_scenario(fs::path(BLOCHSIM_SCENARIO_DIR) / name);
}

const std::vector<std::string> kScenarios{"fig2.json", "fig3.json", "fig4.json", "fig5.json", "fig6.json"};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double max_abs(const ChainState& s) {
  double m = 0.0;
  for (const auto& c : s.amplitudes) m = std::max(m, std::abs(c));
  return m;
}

double max_diff(const ChainState& x, const ChainState& y) {
  double d = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) d = std::max(d, std::abs(x.amplitudes[k] - y.amplitudes[k]));
  return d;
}

// 1. Wannier-Stark ladder
Outcome ladder() {
  const auto start = std::chrono::steady_clock::now();
  auto cfg = scenario("fig2.json");
  cfg.wannier_stark.ladder = 10;
  cfg.wannier_stark.margin = 60;
  const auto report = wannier_stark_ladder(cfg);
  const double elapsed = seconds_since(start);
  const double fa = cfg.model.force * cfg.model.a;
  double residual = 0.0, spacing = 0.0;
  for (const auto& r : report.rows) {
    residual = std::max(residual, r.residual_generic);
    if (r.residual_closed) residual = std::max(residual, *r.residual_closed);
  }
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    spacing = std::max(spacing, std::abs(report.rows[i].energy - report.rows[i - 1].energy - fa));
  }
  const std::int64_t margin = std::min(-10 - report.window.n_min, report.window.n_max - 10);
  const bool ok = report.rows.size() == 21 && residual < 1e-8 && spacing < 1e-14 && margin >= 60 &&
                  elapsed < 5.0;
  return {ok, fmt("max residual %.3g, spacing error %.3g, margin %lld sites, %.2f s", residual, spacing,
                  static_cast<long long>(margin), elapsed)};
}

// 2. rk4 / spectral / propagator agreement
Outcome cross_validation() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::string where;
  for (const char* name : {"fig2.json", "fig6.json"}) {
    auto cfg = scenario(name);
    cfg.compare.times = 16;
    const auto report = compare_methods(cfg);
    for (const auto& row : report.rows) {
      for (double v : {row.rk4_vs_spectral, row.rk4_vs_propagator, row.spectral_vs_propagator}) {
        if (v > worst) {
          worst = v;
          where = fmt("%s t=%.4g", name, row.t);
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {worst < 1e-6 && elapsed < 30.0,
          fmt("worst pairwise discrepancy %.3g (%s), %.2f s", worst, where.c_str(), elapsed)};
}

// 3. Bloch-period return for every bundled scenario
Outcome periodicity() {
  double worst = 0.0;
  std::string which;
  for (const auto& name : kScenarios) {
    const auto r = simulate(scenario(name));
    const double err = max_diff(r.states.back(), r.states.front()) / max_abs(r.states.front());
    if (err >= worst) {
      worst = err;
      which = name;
    }
  }
  return {worst < 1e-6, fmt("worst return error %.3g (%s)", worst, which.c_str())};
}

// 4. gaussian packet on the Hatano-Nelson lattice follows Re x0
Outcome gaussian_trajectory() {
  const auto r = simulate(scenario("fig2.json"));
  const auto orbit = complex_orbit(r.model);
  double worst = 0.0, peak = 0.0;
  for (const auto& o : r.observables) {
    worst = std::max(worst, std::abs(o.centroid_n - orbit(o.t).real() / r.model.period()));
    peak = std::max(peak, o.centroid_n);
  }
  const double expected = 4.0 * r.model.delta_r() / (r.model.force() * r.model.period());
  const double peak_rel = std::abs(peak / expected - 1.0);
  return {r.observables.size() == 256 && worst < 0.5 && peak_rel < 0.02,
          fmt("max |<n> - Re x0/a| = %.3f sites over %zu samples, peak %.3f vs %.3f (%.2f%%)", worst,
              r.observables.size(), peak, expected, 100.0 * peak_rel)};
}

// 5. acceleration-theorem correction
Outcome theta() {
  const auto r = simulate(scenario("fig2.json"));
  const auto s0 = to_spectrum(r.states.front(), r.model.period());
  double worst = 0.0;
  for (const auto& o : r.observables) worst = std::max(worst, std::abs(o.theta_measured - theta_correction(s0, r.model, o.t)));
  const double tb = r.model.bloch_period();
  const double ends = std::max({std::abs(theta_correction(s0, r.model, 0.0)), std::abs(theta_correction(s0, r.model, tb)),
                                std::abs(r.observables.front().theta_measured), std::abs(r.observables.back().theta_measured)});
  const auto h = simulate(scenario("fig3.json"));
  double herm = 0.0;
  for (const auto& o : h.observables) herm = std::max(herm, std::abs(o.theta_measured));
  const double pi_a = kPi / r.model.period();
  return {worst < 1e-6 * pi_a && ends < 1e-8 && herm < 1e-10,
          fmt("measured vs analytic %.3g (limit %.3g), endpoints %.3g, Hermitian control %.3g", worst, 1e-6 * pi_a,
              ends, herm)};
}

// 6. two-humped packet departs from Re x0 but follows the shifted-profile prediction
Outcome two_humped() {
  const auto r = simulate(scenario("fig4.json"));
  const auto orbit = complex_orbit(r.model);
  std::vector<double> times;
  for (const auto& o : r.observables) times.push_back(o.t);
  const auto predicted = predict_trajectory(r.resolved, times);
  double departure = 0.0, mismatch = 0.0;
  for (std::size_t i = 0; i < r.observables.size(); ++i) {
    departure = std::max(departure, std::abs(r.observables[i].centroid_n - orbit(times[i]).real() / r.model.period()));
    mismatch = std::max(mismatch, std::abs(r.observables[i].centroid_n - predicted[i].centroid));
  }
  return {predicted.size() == times.size() && departure > 0.2 && mismatch < 0.5,
          fmt("max departure from Re x0/a %.3f sites, max mismatch to predicted centroid %.3f sites", departure,
              mismatch)};
}

// 7. imaginary hopping: no drift, breathing width, norm growth
Outcome breathing() {
  const auto r = simulate(scenario("fig6.json"));
  double drift = 0.0, lo = INFINITY, hi = 0.0;
  for (const auto& o : r.observables) {
    drift = std::max(drift, std::abs(o.centroid_n));
    lo = std::min(lo, o.width);
    hi = std::max(hi, o.width);
  }
  const double width_return = std::abs(r.observables.back().width - r.observables.front().width);

  const double fa = r.model.force() * r.model.period();
  const double t = 0.5 * kPi / fa;
  const std::vector<double> grid{0.0, t};
  EvolveSettings st;
  st.method = r.resolved.run.method;
  st.dt = *r.resolved.run.dt;
  st.boundary_guard = r.resolved.run.boundary_guard;
  st.boundary_tol = r.resolved.run.boundary_tol;
  const auto states = run(r.states.front(), r.model, st, grid);
  const double measured = states[1].norm() / states[0].norm();
  const double predicted = predict_trajectory(r.resolved, grid)[1].norm_ratio;
  const double norm_rel = std::abs(measured / predicted - 1.0);

  const bool ok = drift < 1e-8 && width_return < 1e-4 && hi - lo > 1e-2 && norm_rel < 0.01;
  return {ok, fmt("max |<n>| %.3g, width %.3f..%.3f with return error %.3g, norm ratio at Fat=pi/2 %.6g vs "
                  "predicted %.6g (%.1f%% off)",
                  drift, lo, hi, width_return, measured, predicted, 100.0 * norm_rel)};
}

// 8. Hatano-Nelson dynamics as a conjugated Hermitian problem
Outcome gauge_map() {
  const auto cfg = resolve(scenario("fig2.json"));
  const auto hn = build_model(cfg.model);
  auto herm_cfg = cfg.model;
  herm_cfg.mu = 0.0;
  const auto herm = build_model(herm_cfg);
  const double mu = cfg.model.mu;
  const auto c0 = build_state(cfg.profile, *cfg.run.window);
  auto conj = [&](ChainState s, double sign) {
    for (std::size_t k = 0; k < s.size(); ++k) {
      s.amplitudes[k] *= std::exp(sign * mu * static_cast<double>(s.n_min + static_cast<std::int64_t>(k)));
    }
    return s;
  };
  const auto grid = time_grid(hn.bloch_period(), 17);
  EvolveSettings st;
  st.dt = *cfg.run.dt;
  st.boundary_tol = 1.0;
  const auto direct = run(c0, hn, st, grid);
  const auto mapped = run(conj(c0, 1.0), herm, st, grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto back = conj(mapped[i], -1.0);
    worst = std::max(worst, max_diff(direct[i], back) / std::max(max_abs(direct[i]), max_abs(back)));
  }
  return {worst < 1e-8, fmt("max relative difference %.3g over %zu times", worst, grid.size())};
}

// 9. Bessel kernels against extended-precision series
long double series(int n, long double x, long double sign) {
  long double term = 1.0L;
  for (int k = 1; k <= n; ++k) term *= x / (2.0L * k);
  long double sum = term;
  for (int k = 1; k < 40; ++k) {
    term *= sign * (x / 2.0L) * (x / 2.0L) / (static_cast<long double>(k) * (k + n));
    sum += term;
  }
  return sum;
}

Outcome bessel() {
  // orders and arguments reached by the bundled scenarios: |x| <= 4 kappa/(F a) = 20
  double j_err = 0.0, i_err = 0.0, addition = 0.0;
  for (int n = 0; n <= 60; ++n) {
    for (int step = 1; step <= 80; ++step) {
      const double x = 0.25 * step;
      j_err = std::max(j_err, std::abs(bessel_j(n, x) - static_cast<double>(series(n, x, -1.0L))));
      const long double ref = series(n, x, 1.0L);
      if (ref > 1e-300L) i_err = std::max(i_err, static_cast<double>(std::abs(bessel_i(n, x) / ref - 1.0L)));
    }
  }
  for (double x : {0.5, 2.0, 7.5, 10.0, 15.0, 20.0}) {
    double sum = 0.0;
    for (int n = -80; n <= 80; ++n) sum += std::pow(bessel_j(n, x), 2);
    addition = std::max(addition, std::abs(sum - 1.0));
  }
  return {j_err < 1e-10 && i_err < 1e-10 && addition < 1e-10,
          fmt("J abs error %.3g, I rel error %.3g, |sum J^2 - 1| %.3g", j_err, i_err, addition)};
}

// 10. byte-identical reruns
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "blochsim_acceptance";
  fs::remove_all(root);
  std::ostringstream log;
  std::vector<std::string> differing;
  int files = 0;
  for (const auto& name : kScenarios) {
    const fs::path cfg = fs::path(BLOCHSIM_SCENARIO_DIR) / name;
    const std::string stem = fs::path(name).stem().string();
    if (cmd_run(cfg, root / (stem + "_a"), true, log) != 0 || cmd_run(cfg, root / (stem + "_b"), true, log) != 0) {
      return {false, "run failed for " + name + ": " + log.str()};
    }
    for (const char* f : {"snapshots.csv", "observables.csv", "predictions.csv", "heatmap.svg", "trajectory.svg"}) {
      ++files;
      if (slurp(root / (stem + "_a") / f) != slurp(root / (stem + "_b") / f)) differing.push_back(stem + "/" + f);
    }
  }
  fs::remove_all(root);
  std::string detail = fmt("%d data files compared, %zu differ", files, differing.size());
  for (const auto& d : differing) detail += " " + d;
  return {differing.empty(), detail};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "Wannier-Stark ladder residuals and spacing", ladder},
      {2, "rk4, spectral and propagator agree", cross_validation},
      {3, "state returns after one Bloch period", periodicity},
      {4, "gaussian centroid follows Re x0", gaussian_trajectory},
      {5, "momentum centroid correction", theta},
      {6, "two-humped centroid follows the shifted profile", two_humped},
      {7, "imaginary hopping breathes without drift", breathing},
      {8, "gauge map to the Hermitian lattice", gauge_map},
      {9, "Bessel kernels", bessel},
      {10, "deterministic outputs", determinism},
  };
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "usage: %s [1-%zu]\n", argv[0], criteria.size());
      return 2;
    }
  }
  int failures = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    Outcome out;
    try {
      out = c.check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %d: %s -- %s\n", out.pass ? "PASS" : "FAIL", c.id, c.title, out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
