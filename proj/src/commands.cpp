#include "blochsim/commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "blochsim/analytic.hpp"
#include "blochsim/error.hpp"
#include "blochsim/evolve.hpp"
#include "blochsim/output.hpp"

namespace blochsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

EvolveSettings settings_for(const ScenarioConfig& r, Method method) {
  EvolveSettings s;
  s.method = method;
  s.dt = r.run.dt.value_or(0.0);
  s.boundary_guard = r.run.boundary_guard;
  s.boundary_tol = r.run.boundary_tol;
  return s;
}

bool has_closed_profile(const ProfileSpec& p) {
  return p.kind == ProfileKind::gaussian || p.kind == ProfileKind::two_humped;
}

double max_abs(const ChainState& s) {
  double m = 0.0;
  for (const auto& c : s.amplitudes) m = std::max(m, std::abs(c));
  return m;
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json window_json(SiteWindow w) { return {{"n_min", w.n_min}, {"n_max", w.n_max}}; }

json meta_json(const ScenarioConfig& resolved, const LatticeModel& model, const char* command,
               double wall) {
  json meta = {{"command", command},
               {"config", to_json(resolved)},
               {"window", window_json(*resolved.run.window)},
               {"sites", resolved.run.window->size()},
               {"hermitian", model.is_hermitian()},
               {"warnings", model.warnings()},
               {"wall_time_s", wall},
               {"timestamp", utc_timestamp()}};
  meta["bloch_period"] = model.force() != 0.0 ? json(model.bloch_period()) : json(nullptr);
  return meta;
}

template <class Fn>
int guarded(std::ostream& log, Fn&& body) {
  try {
    return body();
  } catch (const WindowTooSmall& e) {
    log << "error: " << e.what() << "\n";
    return kExitGuard;
  } catch (const Error& e) {
    log << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

ScenarioResult simulate(const ScenarioConfig& config) {
  ScenarioConfig resolved = resolve(config);
  LatticeModel model = build_model(resolved.model);
  const ChainState initial = build_state(resolved.profile, *resolved.run.window);
  const auto times = time_grid(*resolved.run.t_max, resolved.run.snapshots);
  auto states = run(initial, model, settings_for(resolved, resolved.run.method), times);
  auto rows = record(states, model, resolved.run.boundary_guard);
  return {std::move(resolved), std::move(model), std::move(states), std::move(rows)};
}

std::vector<PredictionRow> predict_trajectory(const ScenarioConfig& resolved,
                                              std::span<const double> times) {
  std::vector<PredictionRow> rows;
  const LatticeModel model = build_model(resolved.model);
  if (model.force() == 0.0 || !has_closed_profile(resolved.profile)) return rows;
  const SiteWindow w = *resolved.run.window;
  const ComplexOrbit orbit(model);
  const auto p0 = predicted_profile(resolved.profile, model, 0.0, w);
  double total0 = 0.0;
  for (double v : p0) total0 += v;
  for (double t : times) {
    const auto p = predicted_profile(resolved.profile, model, t, w);
    double total = 0.0;
    for (double v : p) total += v;
    rows.push_back({t, orbit(t), norm_factor(model, t), profile_centroid(p, w), total / total0});
  }
  return rows;
}

double relative_discrepancy(const ChainState& x, const ChainState& y) {
  if (x.n_min != y.n_min || x.size() != y.size()) {
    throw Error(ErrorCode::invalid_parameter, "states live on different windows");
  }
  const double scale = std::max(max_abs(x), max_abs(y));
  if (scale == 0.0) return 0.0;
  double d = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    d = std::max(d, std::abs(x.amplitudes[k] - y.amplitudes[k]));
  }
  return d / scale;
}

CompareReport compare_methods(const ScenarioConfig& config) {
  const ScenarioConfig r = resolve(config);
  const LatticeModel model = build_model(r.model);
  const ChainState initial = build_state(r.profile, *r.run.window);
  const double t_max = *r.run.t_max;
  const auto times =
      r.compare.times >= 2 ? time_grid(t_max, r.compare.times) : std::vector<double>{0.0, t_max};

  const auto rk4 = run(initial, model, settings_for(r, Method::rk4), times);
  const auto spectral = run(initial, model, settings_for(r, Method::spectral), times);
  const auto prop = run(initial, model, settings_for(r, Method::propagator), times);

  CompareReport rep;
  rep.tolerance = r.compare.tolerance;
  auto consider = [&](const std::string& what, double t, double v) {
    if (v > rep.worst_value || rep.worst.empty()) {
      rep.worst_value = v;
      std::ostringstream os;
      os << what << " at t=" << format_double(t);
      rep.worst = os.str();
    }
  };
  for (std::size_t k = 0; k < times.size(); ++k) {
    MethodDiscrepancy d;
    d.t = times[k];
    d.rk4_vs_spectral = relative_discrepancy(rk4[k], spectral[k]);
    d.rk4_vs_propagator = relative_discrepancy(rk4[k], prop[k]);
    d.spectral_vs_propagator = relative_discrepancy(spectral[k], prop[k]);
    consider("rk4_vs_spectral", d.t, d.rk4_vs_spectral);
    consider("rk4_vs_propagator", d.t, d.rk4_vs_propagator);
    consider("spectral_vs_propagator", d.t, d.spectral_vs_propagator);
    rep.rows.push_back(d);
  }

  if (model.force() != 0.0) {
    const double tb = model.bloch_period();
    const double scale = max_abs(initial);
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double cycles = times[k] / tb;
      if (std::round(cycles) < 1.0 || std::abs(cycles - std::round(cycles)) > 1e-9) continue;
      auto ret = [&](const ChainState& s) {
        double d = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
          d = std::max(d, std::abs(s.amplitudes[i] - initial.amplitudes[i]));
        }
        return d / scale;
      };
      json row = {{"t", times[k]},
                  {"rk4", ret(rk4[k])},
                  {"spectral", ret(spectral[k])},
                  {"propagator", ret(prop[k])}};
      for (const char* m : {"rk4", "spectral", "propagator"}) {
        consider(std::string("return_to_initial_") + m, times[k], row[m].get<double>());
      }
      rep.returns.push_back(row);
    }
  }

  bool ok = rep.worst_value < rep.tolerance;
  if (model.is_hermitian()) {
    const double n0 = rk4.front().norm();
    double drift = 0.0;
    for (const auto& s : rk4) drift = std::max(drift, std::abs(s.norm() / n0 - 1.0));
    rep.norm_drift = drift;
    if (!(drift < r.compare.norm_drift_tolerance)) {
      ok = false;
      rep.worst = "norm_drift (rk4)";
      rep.worst_value = drift;
    }
  }

  if (model.force() != 0.0 && has_closed_profile(r.profile)) {
    const auto pred = predict_trajectory(r, times);
    const double n0 = rk4.front().norm();
    for (std::size_t k = 0; k < times.size(); ++k) {
      const auto p = predicted_profile(r.profile, model, times[k], *r.run.window);
      double ptot = 0.0;
      for (double v : p) ptot += v;
      const double mtot = rk4[k].norm();
      double diff = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        diff = std::max(diff, std::abs(std::norm(rk4[k].amplitudes[i]) / mtot - p[i] / ptot));
      }
      rep.profile.push_back({{"t", times[k]},
                             {"measured_centroid", centroid_n(rk4[k])},
                             {"predicted_centroid", pred[k].centroid},
                             {"re_x0_over_a", pred[k].x0.real() / model.period()},
                             {"measured_norm_ratio", mtot / n0},
                             {"predicted_norm_ratio", pred[k].norm_ratio},
                             {"normalized_profile_max_abs_diff", diff}});
    }
  }
  rep.pass = ok;
  return rep;
}

json to_json(const CompareReport& rep) {
  json rows = json::array();
  for (const auto& d : rep.rows) {
    rows.push_back({{"t", d.t},
                    {"rk4_vs_spectral", d.rk4_vs_spectral},
                    {"rk4_vs_propagator", d.rk4_vs_propagator},
                    {"spectral_vs_propagator", d.spectral_vs_propagator}});
  }
  json doc = {{"tolerance", rep.tolerance},
              {"discrepancy", "max_n |x_n - y_n| / max(max_n |x_n|, max_n |y_n|)"},
              {"methods", rows},
              {"return_to_initial", rep.returns},
              {"profile_prediction", rep.profile},
              {"worst", {{"what", rep.worst}, {"value", rep.worst_value}}},
              {"pass", rep.pass}};
  doc["norm_drift"] = rep.norm_drift ? json(*rep.norm_drift) : json(nullptr);
  return doc;
}

LadderReport wannier_stark_ladder(const ScenarioConfig& config) {
  const LatticeModel model = build_model(config.model);
  if (model.force() == 0.0) throw Error(ErrorCode::config, "wannier-stark needs F != 0");
  const int ladder = config.wannier_stark.ladder;
  const std::int64_t half = ladder + config.wannier_stark.margin;
  LadderReport rep;
  rep.window = {-half, half};
  for (int l = -ladder; l <= ladder; ++l) {
    LadderRow row;
    row.l = l;
    row.energy = ws_energy(l, model);
    auto generic = ws_state_generic(l, model, rep.window);
    row.residual_generic = ws_residual(generic, model);
    if (model.kind() == ModelKind::hatano_nelson) {
      const auto& p = model.builtin();
      auto closed = ws_state_hn(l, p.kappa, p.mu, model.force(), model.period(), rep.window);
      row.residual_closed = ws_residual(closed, model);
      double d = 0.0;
      for (std::size_t k = 0; k < closed.amplitudes.size(); ++k) {
        d = std::max(d, std::abs(closed.amplitudes.amplitudes[k] - generic.amplitudes.amplitudes[k]));
      }
      row.closed_vs_generic = d;
      rep.closed.push_back(std::move(closed));
    }
    rep.generic.push_back(std::move(generic));
    rep.rows.push_back(row);
  }
  return rep;
}

int cmd_run(const fs::path& config, const fs::path& out_dir, bool svg, std::ostream& log) {
  return guarded(log, [&] {
    const auto start = std::chrono::steady_clock::now();
    const ScenarioConfig cfg = load_scenario(config);
    const ScenarioResult res = simulate(cfg);
    fs::create_directories(out_dir);
    const auto& r = res.resolved;
    std::vector<double> times;
    for (const auto& s : res.states) times.push_back(s.t);
    const auto pred = predict_trajectory(r, times);

    if (r.outputs.csv) {
      write_snapshots_csv(out_dir / "snapshots.csv", res.states);
      write_observables_csv(out_dir / "observables.csv", res.observables);
      if (!pred.empty()) {
        std::ofstream out(out_dir / "predictions.csv", std::ios::binary);
        out << "t,re_x0,im_x0,norm_factor,predicted_centroid,predicted_norm_ratio\n";
        for (const auto& p : pred) {
          out << format_double(p.t) << ',' << format_double(p.x0.real()) << ','
              << format_double(p.x0.imag()) << ',' << format_double(p.norm_factor) << ','
              << format_double(p.centroid) << ',' << format_double(p.norm_ratio) << '\n';
        }
        if (!out) throw std::runtime_error("write failed: predictions.csv");
      }
    }
    if (svg || r.outputs.svg) {
      const std::string title = r.name.empty() ? res.model.label() : r.name;
      emit_svg_heatmap(out_dir / "heatmap.svg", title + ": |c_n(t)|^2", res.states,
                       r.outputs.normalize_snapshots);
      std::vector<double> reference;
      for (const auto& p : pred) reference.push_back(p.centroid);
      emit_svg_trajectory(out_dir / "trajectory.svg", title, res.observables, reference);
    }
    if (r.outputs.json) {
      write_json(out_dir / "meta.json", meta_json(r, res.model, "run", seconds_since(start)));
    }
    log << "run: " << res.states.size() << " snapshots on " << r.run.window->size()
        << " sites written to " << out_dir.string() << "\n";
    return kExitOk;
  });
}

int cmd_compare(const fs::path& config, const fs::path& out_dir, std::ostream& log) {
  return guarded(log, [&] {
    const auto start = std::chrono::steady_clock::now();
    const ScenarioConfig cfg = load_scenario(config);
    const CompareReport rep = compare_methods(cfg);
    fs::create_directories(out_dir);
    write_json(out_dir / "report.json", to_json(rep));
    const ScenarioConfig r = resolve(cfg);
    write_json(out_dir / "meta.json",
               meta_json(r, build_model(r.model), "compare", seconds_since(start)));
    if (!rep.pass) {
      log << "compare: tolerance breach, worst offender " << rep.worst << " = "
          << format_double(rep.worst_value) << " (tolerance " << format_double(rep.tolerance)
          << ")\n";
      return kExitTolerance;
    }
    log << "compare: all methods agree; worst " << rep.worst << " = "
        << format_double(rep.worst_value) << "\n";
    return kExitOk;
  });
}

int cmd_wannier_stark(const fs::path& config, const fs::path& out_dir, std::ostream& log) {
  return guarded(log, [&] {
    const auto start = std::chrono::steady_clock::now();
    const ScenarioConfig cfg = load_scenario(config);
    const LadderReport rep = wannier_stark_ladder(cfg);
    fs::create_directories(out_dir);
    {
      std::ofstream out(out_dir / "ladder.csv", std::ios::binary);
      out << "l,energy,spacing,residual_generic,residual_closed,closed_vs_generic\n";
      for (std::size_t k = 0; k < rep.rows.size(); ++k) {
        const auto& row = rep.rows[k];
        out << row.l << ',' << format_double(row.energy) << ','
            << (k > 0 ? format_double(row.energy - rep.rows[k - 1].energy) : "") << ','
            << format_double(row.residual_generic) << ','
            << (row.residual_closed ? format_double(*row.residual_closed) : "") << ','
            << (row.closed_vs_generic ? format_double(*row.closed_vs_generic) : "") << '\n';
      }
      if (!out) throw std::runtime_error("write failed: ladder.csv");
    }
    {
      std::ofstream out(out_dir / "states.csv", std::ios::binary);
      out << "l,n,re,im,abs,re_closed,im_closed,abs_closed\n";
      for (std::size_t k = 0; k < rep.generic.size(); ++k) {
        const auto& g = rep.generic[k].amplitudes;
        for (std::size_t i = 0; i < g.size(); ++i) {
          const cplx c = g.amplitudes[i];
          out << rep.generic[k].l << ',' << (g.n_min + static_cast<std::int64_t>(i)) << ','
              << format_double(c.real()) << ',' << format_double(c.imag()) << ','
              << format_double(std::abs(c));
          if (k < rep.closed.size()) {
            const cplx d = rep.closed[k].amplitudes.amplitudes[i];
            out << ',' << format_double(d.real()) << ',' << format_double(d.imag()) << ','
                << format_double(std::abs(d));
          } else {
            out << ",,,";
          }
          out << '\n';
        }
      }
      if (!out) throw std::runtime_error("write failed: states.csv");
    }
    double worst = 0.0;
    for (const auto& row : rep.rows) {
      worst = std::max(worst, row.residual_generic);
      if (row.residual_closed) worst = std::max(worst, *row.residual_closed);
    }
    ScenarioConfig r = cfg;
    r.run.window = rep.window;
    r = resolve(r);
    json meta = meta_json(r, build_model(r.model), "wannier-stark", seconds_since(start));
    meta["max_residual"] = worst;
    write_json(out_dir / "meta.json", meta);
    log << "wannier-stark: " << rep.rows.size() << " states, max residual "
        << format_double(worst) << "\n";
    return kExitOk;
  });
}

int cmd_sweep(const fs::path& sweep, const fs::path& out_dir, bool svg, std::ostream& log) {
  std::vector<fs::path> configs;
  std::string command = "run";
  const int parse = guarded(log, [&] {
    std::ifstream in(sweep);
    if (!in) throw Error(ErrorCode::config, "cannot open sweep file " + sweep.string());
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::config, sweep.string() + ": " + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::config, "sweep: expected an object");
    for (const auto& [key, value] : doc.items()) {
      if (key != "version" && key != "command" && key != "scenarios") {
        throw Error(ErrorCode::config, "sweep: unknown key \"" + key + "\"");
      }
    }
    if (doc.value("version", 0) != 1) throw Error(ErrorCode::config, "sweep.version must be 1");
    command = doc.value("command", std::string("run"));
    if (command != "run" && command != "compare" && command != "wannier-stark") {
      throw Error(ErrorCode::config, "sweep.command must be run, compare or wannier-stark");
    }
    if (!doc.contains("scenarios") || !doc.at("scenarios").is_array()) {
      throw Error(ErrorCode::config, "sweep.scenarios must be an array of paths");
    }
    for (const auto& s : doc.at("scenarios")) {
      if (!s.is_string()) throw Error(ErrorCode::config, "sweep.scenarios: expected strings");
      fs::path p = s.get<std::string>();
      configs.push_back(p.is_absolute() ? p : sweep.parent_path() / p);
    }
    return kExitOk;
  });
  if (parse != kExitOk) return parse;

  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BLOCHSIM_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) threads = std::min<unsigned>(threads, static_cast<unsigned>(cap));
  }
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(configs.size(), 1)));

  std::vector<int> codes(configs.size(), kExitOk);
  std::vector<std::string> logs(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      std::ostringstream os;
      const fs::path dir = out_dir / configs[i].stem();
      if (command == "run") {
        codes[i] = cmd_run(configs[i], dir, svg, os);
      } else if (command == "compare") {
        codes[i] = cmd_compare(configs[i], dir, os);
      } else {
        codes[i] = cmd_wannier_stark(configs[i], dir, os);
      }
      logs[i] = os.str();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int worst = kExitOk;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    log << "[" << configs[i].stem().string() << "] " << logs[i];
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

}  // namespace blochsim
