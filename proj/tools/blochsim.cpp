#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "blochsim/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"blochsim: Bloch oscillations on driven non-Hermitian tight-binding chains"};
  app.require_subcommand(1);

  std::string config;
  std::string out = "out";
  bool svg = false;

  auto* run = app.add_subcommand("run", "evolve a scenario and write snapshots/observables");
  auto* compare = app.add_subcommand("compare", "cross-validate rk4, spectral and propagator");
  auto* ws = app.add_subcommand("wannier-stark", "Wannier-Stark ladder and eigenstates");
  auto* sweep = app.add_subcommand("sweep", "run several scenarios, one worker thread each");
  for (auto* sub : {run, compare, ws, sweep}) {
    sub->add_option("config", config, "scenario (or sweep) JSON file")->required();
    sub->add_option("--out", out, "output directory");
  }
  run->add_flag("--svg", svg, "also write heatmap.svg and trajectory.svg");
  sweep->add_flag("--svg", svg, "write SVG plots for each scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : blochsim::kExitConfig;
  }

  if (*run) return blochsim::cmd_run(config, out, svg, std::cerr);
  if (*compare) return blochsim::cmd_compare(config, out, std::cerr);
  if (*ws) return blochsim::cmd_wannier_stark(config, out, std::cerr);
  return blochsim::cmd_sweep(config, out, svg, std::cerr);
}
