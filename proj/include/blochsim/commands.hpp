#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "blochsim/analytic.hpp"
#include "blochsim/model.hpp"
#include "blochsim/observe.hpp"
#include "blochsim/scenario.hpp"

namespace blochsim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitGuard = 2;
inline constexpr int kExitTolerance = 3;

struct ScenarioResult {
  ScenarioConfig resolved;
  LatticeModel model;
  std::vector<ChainState> states;
  std::vector<Observables> observables;
};

/// Resolves the config, evolves with the configured method and records
/// observables. Throws Error (config / window_too_small / ...).
ScenarioResult simulate(const ScenarioConfig& config);

/// Rows of the first-order (shifted complex profile) prediction.
struct PredictionRow {
  double t = 0.0;
  cplx x0;
  double norm_factor = 1.0;
  double centroid = 0.0;
  double norm_ratio = 1.0;
};

/// Empty when the profile has no closed form or F = 0.
std::vector<PredictionRow> predict_trajectory(const ScenarioConfig& resolved,
                                              std::span<const double> times);

struct MethodDiscrepancy {
  double t = 0.0;
  double rk4_vs_spectral = 0.0;
  double rk4_vs_propagator = 0.0;
  double spectral_vs_propagator = 0.0;
};

struct CompareReport {
  double tolerance = 0.0;
  std::vector<MethodDiscrepancy> rows;
  /// ||c(t) - c(0)||_inf / ||c(0)||_inf per method at times that are
  /// multiples of T_B; empty otherwise.
  nlohmann::json returns = nlohmann::json::array();
  std::optional<double> norm_drift;  // Hermitian models only
  nlohmann::json profile = nlohmann::json::array();
  bool pass = true;
  std::string worst;
  double worst_value = 0.0;
};

/// Max-norm difference relative to the larger snapshot's peak amplitude.
double relative_discrepancy(const ChainState& x, const ChainState& y);

CompareReport compare_methods(const ScenarioConfig& config);
nlohmann::json to_json(const CompareReport& report);

struct LadderRow {
  int l = 0;
  double energy = 0.0;
  double residual_generic = 0.0;
  std::optional<double> residual_closed;
  std::optional<double> closed_vs_generic;
};

struct LadderReport {
  SiteWindow window;
  std::vector<LadderRow> rows;
  std::vector<WannierStarkState> generic;
  std::vector<WannierStarkState> closed;
};

LadderReport wannier_stark_ladder(const ScenarioConfig& config);

// CLI entry points: return the process exit code and report on `log`.
int cmd_run(const std::filesystem::path& config, const std::filesystem::path& out_dir, bool svg,
            std::ostream& log);
int cmd_compare(const std::filesystem::path& config, const std::filesystem::path& out_dir,
                std::ostream& log);
int cmd_wannier_stark(const std::filesystem::path& config, const std::filesystem::path& out_dir,
                      std::ostream& log);
/// Sweep file: {"version": 1, "command": "run", "scenarios": ["a.json", ...]};
/// each scenario writes to out_dir/<stem>. Parallelism capped by
/// BLOCHSIM_THREADS.
int cmd_sweep(const std::filesystem::path& sweep, const std::filesystem::path& out_dir, bool svg,
              std::ostream& log);

}  // namespace blochsim
