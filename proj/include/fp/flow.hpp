#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fp/backprop.hpp"
#include "fp/loss.hpp"
#include "fp/network.hpp"

namespace fp {

enum class Integrator { gradient_flow_euler, gradient_flow_rk4, adam };

struct FlowConfig {
  Integrator integrator = Integrator::gradient_flow_euler;
  double step_size = 1e-3;
  std::int64_t total_steps = 1000;
  std::int64_t checkpoint_stride = 10;
  std::uint64_t seed = 0;
  std::optional<double> trajectory_bound;  // R of the bounded-trajectory assumption

  void validate() const;
  bool operator==(const FlowConfig&) const = default;
};

inline constexpr std::uint32_t kFlagDegenerateGradient = 1u << 0;
inline constexpr std::uint32_t kFlagBoundExceeded = 1u << 1;

struct Checkpoint {
  double t = 0.0;
  double loss = 0.0;
  std::vector<double> theta;
  std::vector<double> dtheta_dt;
  std::uint32_t flags = 0;
};

/// Time-stamped integration record. For gradient-flow integrators the stored
/// dtheta_dt equals the negative loss gradient at the checkpoint; for adam it
/// is the central parameter difference over one step (one-sided at the ends).
struct TrajectoryRecord {
  NetworkSpec spec;
  LossKind loss;
  FlowConfig config;
  std::vector<Checkpoint> checkpoints;
  bool trivial_dynamics = false;
  bool bound_exceeded = false;
};

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fills grad, returns the loss value.
using Objective = std::function<double(std::span<const double>, std::span<double>)>;

TrajectoryRecord integrate_objective(const Objective& objective, std::vector<double> theta0,
                                     const FlowConfig& config);

TrajectoryRecord integrate(const NetworkSpec& spec, std::span<const double> theta0,
                           const LossKind& loss, const TrainingData& data, const FlowConfig& config,
                           Exec exec = Exec::openmp);

/// Greedy scan for disjoint windows with loss[j] <= loss[i] / 2; returns
/// checkpoint index pairs (i, j).
std::vector<std::pair<int, int>> half_life_windows(std::span<const double> losses);

std::string to_string(Integrator kind);
Integrator integrator_from_string(const std::string& name);

}  // namespace fp
