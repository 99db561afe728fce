#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "fp/backprop.hpp"
#include "fp/bump.hpp"
#include "fp/density.hpp"
#include "fp/diagnostics.hpp"
#include "fp/flow.hpp"
#include "fp/loss.hpp"
#include "fp/network.hpp"
#include "fp/target.hpp"

namespace fp {

struct SampleSpec {
  int count = 300;
  double lo = -3.14;
  double hi = 3.14;
  bool operator==(const SampleSpec&) const = default;
};

struct GridSpec {
  double lo = -3.5;
  double hi = 3.5;
  int m = 1024;
  bool pad4x = false;  // 4x finer frequency axis via a larger grid
  bool operator==(const GridSpec&) const = default;
};

struct EtaSweepSpec {
  bool use_peaks = true;  // detected peak frequencies plus log-spaced fill
  int log_spaced = 8;
  std::vector<double> explicit_etas;
  bool operator==(const EtaSweepSpec&) const = default;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  int version = 1;
  std::string preset;

  NetworkSpec network;
  BumpFunction bump;
  TargetFunction target;
  PopulationDensity density;

  enum class DataSource { samples, quadrature };
  DataSource data_source = DataSource::samples;
  SampleSpec samples;

  LossKind loss;
  FlowConfig flow;
  GridSpec grid_spec;
  EtaSweepSpec eta_sweep;
  std::int64_t diagnostics_stride = 1;

  std::string out_dir = "out";
  std::uint64_t seed = 0;

  Grid grid() const;
  void validate() const;  // throws ConfigError with a field-level message

  bool operator==(const ExperimentConfig&) const = default;
};

nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Runtime validators for the working assumptions: cutoff regularity vs the
/// activation's smoothness order, density boundedness, sqrt-density
/// regularity, the loss sandwich condition, trajectory-bound monitoring.
struct AssumptionReport {
  struct Entry {
    std::string name;
    bool pass = false;
    std::string detail;
  };
  std::vector<Entry> entries;
  Smoothness effective_smoothness;  // min across activation / cutoff profile
  SandwichReport sandwich;

  bool all_pass() const;
  std::string text() const;
  nlohmann::json to_json() const;
};

AssumptionReport validate_assumptions(const ExperimentConfig& cfg);

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

struct RunResult {
  std::string trajectory_path;
  std::string csv_path;
  std::string summary_path;
  std::string target_spectrum_path;
  nlohmann::json summary;

  TrajectoryRecord trajectory;
  std::vector<CheckpointDiagnostics> rows;  // diagnosed checkpoints
  std::vector<double> etas;
  std::vector<int> peak_bins;
  std::vector<double> peak_freqs;
};

RunResult run_experiment(const ExperimentConfig& cfg, Exec exec = Exec::openmp);

/// Recomputes diagnostics from a stored trajectory with the config's grid,
/// target and eta sweep.
RunResult replay_trajectory(const std::string& trajectory_path, const ExperimentConfig& cfg,
                            Exec exec = Exec::openmp);

enum class SweepAxis { eta, grid_m, width, p };

SweepAxis sweep_axis_from_string(const std::string& name);
std::string to_string(SweepAxis axis);

struct SweepResult {
  std::string csv_path;
  int runs = 0;
  int failures = 0;
};

/// One run per axis value with a seed derived from (base seed, index); failed
/// runs are recorded as error rows and the sweep continues.
SweepResult run_sweep(const ExperimentConfig& base, SweepAxis axis, std::span<const double> values,
                      Exec exec = Exec::openmp);

}  // namespace fp
