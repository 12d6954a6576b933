#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "blochsim/observe.hpp"
#include "blochsim/state.hpp"

namespace blochsim {

/// Shortest decimal that round-trips to the same double; '.' separator
/// regardless of locale.
std::string format_double(double value);

void write_snapshots_csv(const std::filesystem::path& path, std::span<const ChainState> states);
void write_observables_csv(const std::filesystem::path& path, std::span<const Observables> rows);

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct SvgPanel {
  std::string y_label;
  std::vector<SvgSeries> series;
};

/// Stacked line plots sharing the x axis.
void emit_svg_lines(const std::filesystem::path& path, const std::string& title,
                    const std::string& x_label, std::span<const SvgPanel> panels);

/// Grayscale raster of |c_n(t)|^2, time running down, sites across.
void emit_svg_heatmap(const std::filesystem::path& path, const std::string& title,
                      std::span<const ChainState> states, bool normalize);

/// Trajectory panels (<n>, <q>, width vs t) for a recorded run; `reference`
/// overlays a dashed <n> prediction when non-empty.
void emit_svg_trajectory(const std::filesystem::path& path, const std::string& title,
                         std::span<const Observables> rows, std::span<const double> reference);

}  // namespace blochsim
