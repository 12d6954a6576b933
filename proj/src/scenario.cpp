#include "blochsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "blochsim/analytic.hpp"
#include "blochsim/error.hpp"

namespace blochsim {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::config, msg); }

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) fail(where + ": unknown key \"" + key + "\"");
  }
}

double number(const json& obj, const char* key, const std::string& where, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(where + "." + key + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(where + "." + key + ": must be finite");
  return d;
}

int integer(const json& obj, const char* key, const std::string& where, int fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) fail(where + "." + key + ": expected an integer");
  return v.get<int>();
}

bool boolean(const json& obj, const char* key, const std::string& where, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) fail(where + "." + key + ": expected true/false");
  return v.get<bool>();
}

std::string text(const json& obj, const char* key, const std::string& where,
                 const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) fail(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

ModelConfig parse_model(const json& j) {
  reject_unknown(j, "model", {"type", "kappa", "mu", "a", "F", "hoppings"});
  ModelConfig m;
  m.type = text(j, "type", "model", "");
  if (m.type != "hatano_nelson" && m.type != "imaginary_hopping" && m.type != "custom") {
    fail("model.type must be hatano_nelson, imaginary_hopping or custom");
  }
  m.kappa = number(j, "kappa", "model", 1.0);
  m.mu = number(j, "mu", "model", 0.0);
  m.a = number(j, "a", "model", 1.0);
  if (!j.contains("F")) fail("model.F is required");
  m.force = number(j, "F", "model", 0.0);
  if (m.type == "custom") {
    if (!j.contains("hoppings") || !j.at("hoppings").is_array()) {
      fail("model.hoppings: custom model needs an array of hoppings");
    }
    for (const auto& h : j.at("hoppings")) {
      reject_unknown(h, "model.hoppings[]", {"offset", "re", "im"});
      if (!h.contains("offset")) fail("model.hoppings[]: offset is required");
      m.hoppings.push_back({integer(h, "offset", "model.hoppings[]", 0),
                            cplx(number(h, "re", "model.hoppings[]", 0.0),
                                 number(h, "im", "model.hoppings[]", 0.0))});
    }
  } else {
    if (j.contains("hoppings")) fail("model.hoppings only applies to custom models");
    if (m.type == "imaginary_hopping" && j.contains("mu")) {
      fail("model.mu does not apply to imaginary_hopping");
    }
  }
  return m;
}

ProfileSpec parse_profile(const json& j) {
  if (!j.is_object()) fail("profile: expected an object");
  const std::string kind = text(j, "kind", "profile", "");
  ProfileSpec p;
  if (kind == "gaussian") {
    reject_unknown(j, "profile", {"kind", "gamma", "center", "normalize"});
    p.kind = ProfileKind::gaussian;
    p.gamma = number(j, "gamma", "profile", 0.02);
  } else if (kind == "two_humped") {
    reject_unknown(j, "profile", {"kind", "alpha", "beta", "center", "normalize"});
    p.kind = ProfileKind::two_humped;
    p.alpha = number(j, "alpha", "profile", 0.02);
    p.beta = number(j, "beta", "profile", 0.04);
  } else if (kind == "single_site") {
    reject_unknown(j, "profile", {"kind", "center", "normalize"});
    p.kind = ProfileKind::single_site;
  } else if (kind == "custom_samples") {
    reject_unknown(j, "profile", {"kind", "n_min", "samples", "center", "normalize"});
    p.kind = ProfileKind::custom_samples;
    p.samples_n_min = integer(j, "n_min", "profile", 0);
    if (!j.contains("samples") || !j.at("samples").is_array() || j.at("samples").empty()) {
      fail("profile.samples: expected a non-empty array");
    }
    for (const auto& s : j.at("samples")) {
      reject_unknown(s, "profile.samples[]", {"re", "im"});
      p.samples.emplace_back(number(s, "re", "profile.samples[]", 0.0),
                             number(s, "im", "profile.samples[]", 0.0));
    }
  } else {
    fail("profile.kind must be gaussian, two_humped, single_site or custom_samples");
  }
  p.center = number(j, "center", "profile", 0.0);
  p.normalize = boolean(j, "normalize", "profile", true);
  return p;
}

RunConfig parse_run(const json& j) {
  reject_unknown(j, "run", {"t_max", "snapshots", "method", "dt", "window", "boundary_guard",
                            "boundary_tol"});
  RunConfig r;
  if (j.contains("t_max")) {
    r.t_max = number(j, "t_max", "run", 0.0);
    if (*r.t_max < 0.0) fail("run.t_max must be >= 0");
  }
  r.snapshots = integer(j, "snapshots", "run", 256);
  if (r.snapshots < 1) fail("run.snapshots must be >= 1");
  const std::string method = text(j, "method", "run", "rk4");
  if (method == "rk4") {
    r.method = Method::rk4;
  } else if (method == "spectral") {
    r.method = Method::spectral;
  } else if (method == "propagator") {
    r.method = Method::propagator;
  } else {
    fail("run.method must be rk4, spectral or propagator");
  }
  if (j.contains("dt")) {
    r.dt = number(j, "dt", "run", 0.0);
    if (!(*r.dt > 0.0)) fail("run.dt must be positive");
  }
  if (j.contains("window")) {
    const auto& w = j.at("window");
    if (w.is_string()) {
      if (w.get<std::string>() != "auto") fail("run.window: expected \"auto\" or {n_min, n_max}");
    } else {
      reject_unknown(w, "run.window", {"n_min", "n_max"});
      if (!w.contains("n_min") || !w.contains("n_max")) fail("run.window needs n_min and n_max");
      SiteWindow sw{integer(w, "n_min", "run.window", 0), integer(w, "n_max", "run.window", 0)};
      if (sw.n_max < sw.n_min) fail("run.window: n_max < n_min");
      r.window = sw;
    }
  }
  r.boundary_guard = integer(j, "boundary_guard", "run", 10);
  r.boundary_tol = number(j, "boundary_tol", "run", 1e-10);
  if (r.boundary_guard < 0 || !(r.boundary_tol > 0.0)) fail("run: invalid boundary guard");
  return r;
}

}  // namespace

const char* to_string(Method method) {
  switch (method) {
    case Method::rk4: return "rk4";
    case Method::spectral: return "spectral";
    case Method::propagator: return "propagator";
  }
  return "?";
}

ScenarioConfig parse_scenario(const json& doc) {
  reject_unknown(doc, "config", {"version", "name", "model", "profile", "run", "outputs",
                                 "compare", "wannier_stark"});
  ScenarioConfig c;
  if (!doc.contains("version")) fail("config.version is required");
  c.version = integer(doc, "version", "config", 0);
  if (c.version != 1) fail("config.version must be 1");
  c.name = text(doc, "name", "config", "");
  if (!doc.contains("model")) fail("config.model is required");
  c.model = parse_model(doc.at("model"));
  if (!doc.contains("profile")) fail("config.profile is required");
  c.profile = parse_profile(doc.at("profile"));
  if (doc.contains("run")) c.run = parse_run(doc.at("run"));
  if (doc.contains("outputs")) {
    const auto& o = doc.at("outputs");
    reject_unknown(o, "outputs", {"csv", "json", "svg", "normalize_snapshots"});
    c.outputs.csv = boolean(o, "csv", "outputs", true);
    c.outputs.json = boolean(o, "json", "outputs", true);
    c.outputs.svg = boolean(o, "svg", "outputs", false);
    c.outputs.normalize_snapshots = boolean(o, "normalize_snapshots", "outputs", true);
  }
  if (doc.contains("compare")) {
    const auto& o = doc.at("compare");
    reject_unknown(o, "compare", {"times", "tolerance", "norm_drift_tolerance"});
    c.compare.times = integer(o, "times", "compare", 16);
    c.compare.tolerance = number(o, "tolerance", "compare", 1e-6);
    c.compare.norm_drift_tolerance = number(o, "norm_drift_tolerance", "compare", 1e-8);
    if (c.compare.times < 1 || !(c.compare.tolerance > 0.0)) fail("compare: invalid settings");
  }
  if (doc.contains("wannier_stark")) {
    const auto& o = doc.at("wannier_stark");
    reject_unknown(o, "wannier_stark", {"ladder", "margin"});
    c.wannier_stark.ladder = integer(o, "ladder", "wannier_stark", 10);
    c.wannier_stark.margin = integer(o, "margin", "wannier_stark", 60);
    if (c.wannier_stark.ladder < 0 || c.wannier_stark.margin < 0) {
      fail("wannier_stark: ladder and margin must be >= 0");
    }
  }
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(path.string() + ": " + e.what());
  }
  return parse_scenario(doc);
}

LatticeModel build_model(const ModelConfig& m) {
  try {
    if (m.type == "hatano_nelson") return make_hatano_nelson(m.kappa, m.mu, m.a, m.force);
    if (m.type == "imaginary_hopping") return make_imaginary_hopping(m.kappa, m.a, m.force);
    return LatticeModel(m.hoppings, m.a, m.force, "custom");
  } catch (const Error& e) {
    fail(std::string("model: ") + e.what());
  }
}

SiteWindow auto_window(const LatticeModel& model, const ProfileSpec& profile, double t_max) {
  const double a = model.period();
  double excursion = 0.0;
  double spread = 0.0;
  if (model.force() != 0.0) {
    const ComplexOrbit orbit(model);
    constexpr int samples = 512;
    for (int k = 0; k <= samples; ++k) {
      excursion = std::max(excursion, std::abs(orbit(orbit.period() * k / samples).real()) / a);
    }
    spread = 2.0 * model.hopping_norm() * model.max_offset() / (std::abs(model.force()) * a);
  } else {
    spread = 2.0 * model.hopping_norm() * model.max_offset() * t_max;
  }
  double decay = 0.0;
  std::int64_t center = std::llround(profile.center);
  switch (profile.kind) {
    case ProfileKind::gaussian:
      decay = 10.0 / std::sqrt(profile.gamma);
      break;
    case ProfileKind::two_humped:
      if (profile.alpha == 0.0) fail("auto window: two-humped profile with alpha = 0 does not decay");
      decay = 14.0 / std::abs(profile.alpha);
      break;
    case ProfileKind::single_site:
      break;
    case ProfileKind::custom_samples: {
      const auto n = static_cast<std::int64_t>(profile.samples.size());
      center = profile.samples_n_min + n / 2;
      decay = static_cast<double>(n) / 2.0 + 1.0;
      break;
    }
  }
  const auto half = static_cast<std::int64_t>(std::ceil(excursion + decay + spread + 20.0));
  return {center - half, center + half};
}

std::vector<double> time_grid(double t_max, int points) {
  std::vector<double> t(static_cast<std::size_t>(std::max(points, 1)), 0.0);
  for (int k = 1; k < points; ++k) t[k] = t_max * k / (points - 1);
  if (points > 1) t.back() = t_max;
  return t;
}

ScenarioConfig resolve(const ScenarioConfig& config) {
  ScenarioConfig r = config;
  const LatticeModel model = build_model(config.model);
  if (!r.run.t_max) {
    if (model.force() == 0.0) fail("run.t_max is required when F = 0");
    r.run.t_max = model.bloch_period();
  }
  if (!r.run.dt) r.run.dt = default_step(model);
  if (!r.run.window) r.run.window = auto_window(model, config.profile, *r.run.t_max);
  return r;
}

json to_json(const ScenarioConfig& c) {
  json model = {{"type", c.model.type}, {"a", c.model.a}, {"F", c.model.force}};
  if (c.model.type != "custom") model["kappa"] = c.model.kappa;
  if (c.model.type == "hatano_nelson") model["mu"] = c.model.mu;
  if (c.model.type == "custom") {
    json hs = json::array();
    for (const auto& h : c.model.hoppings) {
      hs.push_back({{"offset", h.offset}, {"re", h.amplitude.real()}, {"im", h.amplitude.imag()}});
    }
    model["hoppings"] = hs;
  }

  json profile = {{"center", c.profile.center}, {"normalize", c.profile.normalize}};
  switch (c.profile.kind) {
    case ProfileKind::gaussian:
      profile["kind"] = "gaussian";
      profile["gamma"] = c.profile.gamma;
      break;
    case ProfileKind::two_humped:
      profile["kind"] = "two_humped";
      profile["alpha"] = c.profile.alpha;
      profile["beta"] = c.profile.beta;
      break;
    case ProfileKind::single_site:
      profile["kind"] = "single_site";
      break;
    case ProfileKind::custom_samples: {
      profile["kind"] = "custom_samples";
      profile["n_min"] = c.profile.samples_n_min;
      json s = json::array();
      for (const auto& v : c.profile.samples) s.push_back({{"re", v.real()}, {"im", v.imag()}});
      profile["samples"] = s;
      break;
    }
  }

  json run = {{"snapshots", c.run.snapshots},
              {"method", to_string(c.run.method)},
              {"boundary_guard", c.run.boundary_guard},
              {"boundary_tol", c.run.boundary_tol}};
  if (c.run.t_max) run["t_max"] = *c.run.t_max;
  if (c.run.dt) run["dt"] = *c.run.dt;
  if (c.run.window) {
    run["window"] = {{"n_min", c.run.window->n_min}, {"n_max", c.run.window->n_max}};
  } else {
    run["window"] = "auto";
  }

  json doc = {{"version", c.version},
              {"model", model},
              {"profile", profile},
              {"run", run},
              {"outputs",
               {{"csv", c.outputs.csv},
                {"json", c.outputs.json},
                {"svg", c.outputs.svg},
                {"normalize_snapshots", c.outputs.normalize_snapshots}}},
              {"compare",
               {{"times", c.compare.times},
                {"tolerance", c.compare.tolerance},
                {"norm_drift_tolerance", c.compare.norm_drift_tolerance}}},
              {"wannier_stark",
               {{"ladder", c.wannier_stark.ladder}, {"margin", c.wannier_stark.margin}}}};
  if (!c.name.empty()) doc["name"] = c.name;
  return doc;
}

}  // namespace blochsim
