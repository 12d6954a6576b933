#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "blochsim/evolve.hpp"
#include "blochsim/model.hpp"
#include "blochsim/state.hpp"

namespace blochsim {

struct ModelConfig {
  std::string type = "hatano_nelson";  // hatano_nelson | imaginary_hopping | custom
  double kappa = 1.0;
  double mu = 0.0;
  double a = 1.0;
  double force = 0.2;
  std::vector<Hopping> hoppings;  // custom only
};

struct RunConfig {
  std::optional<double> t_max;  // defaults to T_B
  int snapshots = 256;          // time points, both ends included
  Method method = Method::rk4;
  std::optional<double> dt;
  std::optional<SiteWindow> window;  // nullopt: automatic sizing
  int boundary_guard = 10;
  double boundary_tol = 1e-10;
};

struct OutputConfig {
  bool csv = true;
  bool json = true;
  bool svg = false;
  /// Heatmap shading uses |c_n|^2 / sum |c_n|^2 when set, raw |c_n|^2 otherwise.
  bool normalize_snapshots = true;
};

struct CompareConfig {
  int times = 16;
  double tolerance = 1e-6;
  double norm_drift_tolerance = 1e-8;
};

struct WannierStarkConfig {
  int ladder = 10;
  int margin = 60;
};

struct ScenarioConfig {
  int version = 1;
  std::string name;
  ModelConfig model;
  ProfileSpec profile;
  RunConfig run;
  OutputConfig outputs;
  CompareConfig compare;
  WannierStarkConfig wannier_stark;
};

/// Strict parse: unknown keys and non-finite numbers raise config errors.
ScenarioConfig parse_scenario(const nlohmann::json& doc);
ScenarioConfig load_scenario(const std::filesystem::path& path);

LatticeModel build_model(const ModelConfig& config);

/// Half-width ceil(excursion + decay + 2 sum|kappa_l| max|l| / (|F| a) + 20)
/// around the profile centre, where excursion = max_t |Re x0(t)| / a.
SiteWindow auto_window(const LatticeModel& model, const ProfileSpec& profile, double t_max);

/// Fills every defaulted field (t_max, dt, window) so the result re-runs
/// identically.
ScenarioConfig resolve(const ScenarioConfig& config);

nlohmann::json to_json(const ScenarioConfig& config);

std::vector<double> time_grid(double t_max, int points);

const char* to_string(Method method);

}  // namespace blochsim
