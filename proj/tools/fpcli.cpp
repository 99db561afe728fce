// Command-line front end: run experiments, sweep axes, validate assumptions,
// list presets, replay stored trajectories.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fp/experiment.hpp"
#include "fp/presets.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  std::string eta_list;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int grid_m = 0;
  bool serial = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "experiment config JSON");
  cmd->add_option("--preset", o.preset, "named preset");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--seed", o.seed, "seed override")->each([&](const std::string&) { o.seed_set = true; });
  cmd->add_option("--eta", o.eta_list, "comma-separated eta cutoffs (replaces the sweep)");
  cmd->add_option("--grid-m", o.grid_m, "grid size override (power of two)");
  cmd->add_flag("--serial", o.serial, "run kernels on the serial reference path");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) values.push_back(std::stod(item));
  }
  return values;
}

fp::ExperimentConfig resolve_config(const CommonOpts& o) {
  fp::ExperimentConfig cfg;
  if (!o.config_path.empty())
    cfg = fp::load_config(o.config_path);
  else if (!o.preset.empty())
    cfg = fp::preset_config(o.preset);
  else
    throw fp::ConfigError("config: provide --config or --preset");
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  if (o.seed_set) cfg.seed = o.seed;
  if (!o.eta_list.empty()) cfg.eta_sweep = fp::EtaSweepSpec{false, 0, parse_list(o.eta_list)};
  if (o.grid_m > 0) cfg.grid_spec.m = o.grid_m;
  return cfg;
}

fp::Exec exec_of(const CommonOpts& o) { return o.serial ? fp::Exec::serial : fp::Exec::openmp; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency-principle measurement toolkit"};
  app.require_subcommand(1);

  CommonOpts run_opts, sweep_opts, validate_opts, replay_opts;
  std::string axis_name, values_list, trajectory_path;

  CLI::App* run_cmd = app.add_subcommand("run", "train and compute diagnostics");
  add_common(run_cmd, run_opts);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "one run per axis value, merged CSV");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--axis", axis_name, "eta | m | width | p")->required();
  sweep_cmd->add_option("--values", values_list, "comma-separated axis values")->required();

  CLI::App* validate_cmd = app.add_subcommand("validate", "check the working assumptions");
  add_common(validate_cmd, validate_opts);

  CLI::App* presets_cmd = app.add_subcommand("presets", "list named presets");

  CLI::App* replay_cmd = app.add_subcommand("replay", "recompute diagnostics from a trajectory");
  add_common(replay_cmd, replay_opts);
  replay_cmd->add_option("--trajectory", trajectory_path, "stored trajectory file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      const auto cfg = resolve_config(run_opts);
      const auto result = fp::run_experiment(cfg, exec_of(run_opts));
      std::cout << "trajectory: " << result.trajectory_path << "\n"
                << "diagnostics: " << result.csv_path << "\n"
                << "summary: " << result.summary_path << "\n";
      return 0;
    }
    if (sweep_cmd->parsed()) {
      const auto cfg = resolve_config(sweep_opts);
      const auto values = parse_list(values_list);
      const auto axis = fp::sweep_axis_from_string(axis_name);
      const auto result = fp::run_sweep(cfg, axis, values, exec_of(sweep_opts));
      std::cout << "sweep: " << result.csv_path << " (" << result.runs << " runs, "
                << result.failures << " failures)\n";
      return 0;
    }
    if (validate_cmd->parsed()) {
      const auto cfg = resolve_config(validate_opts);
      cfg.validate();
      const auto report = fp::validate_assumptions(cfg);
      std::cout << report.text();
      return 0;
    }
    if (presets_cmd->parsed()) {
      for (const auto& name : fp::preset_names())
        std::cout << name << ": " << fp::preset_description(name) << "\n";
      return 0;
    }
    if (replay_cmd->parsed()) {
      const auto cfg = resolve_config(replay_opts);
      const auto result = fp::replay_trajectory(trajectory_path, cfg, exec_of(replay_opts));
      std::cout << "diagnostics: " << result.csv_path << "\n"
                << "summary: " << result.summary_path << "\n";
      return 0;
    }
  } catch (const fp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const fp::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
