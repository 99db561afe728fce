#pragma once

#include <memory>
#include <span>
#include <vector>

#include "fp/bump.hpp"
#include "fp/density.hpp"
#include "fp/grid.hpp"
#include "fp/loss.hpp"
#include "fp/network.hpp"
#include "fp/parallel.hpp"
#include "fp/target.hpp"

namespace fp {

/// Discretization of the data measure that the losses integrate against:
/// either an empirical sample set (mean weights) or a density-weighted
/// quadrature on a uniform grid. Cutoff and target values are precomputed at
/// the evaluation points.
struct TrainingData {
  enum class Kind { samples, quadrature };

  Kind kind = Kind::samples;
  std::vector<double> xs;
  std::vector<double> weights;
  std::vector<double> chi;
  std::vector<double> targets;

  std::size_t size() const { return xs.size(); }

  static TrainingData from_samples(std::span<const double> xs, const BumpFunction& bump,
                                   const TargetFunction& target);
  static TrainingData from_quadrature(const Grid& grid, const PopulationDensity& density,
                                      const BumpFunction& bump, const TargetFunction& target);
};

/// Reverse-mode differentiation of one network with cached layout and
/// reusable buffers. One instance per thread.
class NetEvaluator {
 public:
  explicit NetEvaluator(const NetworkSpec& spec);

  double value(std::span<const double> theta, double x);

  /// Returns h^(H)(x, theta) and fills grad with its parameter gradient.
  double value_and_gradient(std::span<const double> theta, double x, std::span<double> grad);

  const NetworkSpec& spec() const { return spec_; }
  std::size_t size() const { return layout_.size; }

 private:
  NetworkSpec spec_;
  ThetaLayout layout_;
  ForwardTrace trace_;
  std::vector<std::vector<double>> delta_;
};

/// grad of the raw network output h^(H) with respect to theta.
std::vector<double> grad_output(const NetworkSpec& spec, std::span<const double> theta, double x);

struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad;
};

/// Full-batch loss and exact gradient for the chosen discretization. The
/// per-point contributions are accumulated in fixed 16-point chunks and
/// reduced in chunk order, so serial and OpenMP execution agree bitwise.
class LossEvaluator {
 public:
  LossEvaluator(NetworkSpec spec, LossKind loss, TrainingData data, Exec exec = Exec::openmp);

  /// Objective interface: fills grad (length N), returns the loss.
  double operator()(std::span<const double> theta, std::span<double> grad);
  double loss_only(std::span<const double> theta);

  /// Residual h(x_i, theta) - f(x_i) at every data point.
  std::vector<double> residuals(std::span<const double> theta);

  std::size_t param_count() const { return n_params_; }
  const TrainingData& data() const { return data_; }
  const LossKind& loss_kind() const { return loss_; }
  const NetworkSpec& spec() const { return spec_; }
  Exec exec() const { return exec_; }

 private:
  NetworkSpec spec_;
  LossKind loss_;
  TrainingData data_;
  Exec exec_;
  std::size_t n_params_;
  ChunkPlan plan_;
  std::vector<std::unique_ptr<NetEvaluator>> chunk_eval_;
  std::vector<std::vector<double>> chunk_grad_;
  std::vector<double> chunk_loss_;
  std::vector<std::vector<double>> chunk_point_grad_;
};

LossGrad grad_loss(const NetworkSpec& spec, std::span<const double> theta, const LossKind& loss,
                   const TrainingData& data, Exec exec = Exec::openmp);

/// Worst-coordinate discrepancy between the reverse-mode loss gradient and
/// central finite differences; relative where the scale allows, absolute at
/// zero-gradient coordinates.
double fd_check(const NetworkSpec& spec, std::span<const double> theta, const LossKind& loss,
                const TrainingData& data, double step = 1e-5);

}  // namespace fp
