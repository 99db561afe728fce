#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fp/activation.hpp"

namespace fp {

/// Fully-connected architecture description. widths holds the layer sizes
/// n_0..n_H with n_0 the input dimension and n_H = 1 the scalar output.
/// Hidden layers share one activation; the output layer is affine.
struct NetworkSpec {
  std::vector<int> widths;
  Activation activation = Activation::tanh;

  int depth() const { return static_cast<int>(widths.size()) - 1; }  // H
  int input_dim() const { return widths.front(); }
  Smoothness smoothness() const { return activation_smoothness(activation); }
  void validate() const;

  bool operator==(const NetworkSpec&) const = default;
};

/// Parameter count N = sum_l (n_l + 1) * n_{l+1}.
std::size_t network_size(const NetworkSpec& spec);

/// Offsets of the per-layer weight/bias blocks inside the flat parameter
/// vector. Weights are row-major (rows = n_{l+1}, cols = n_l), biases follow.
struct ThetaLayout {
  struct Block {
    std::size_t weights = 0;
    std::size_t biases = 0;
    int rows = 0;
    int cols = 0;
  };
  std::vector<Block> blocks;
  std::size_t size = 0;

  static ThetaLayout build(const NetworkSpec& spec);
};

struct LayerParams {
  std::vector<double> weights;  // row-major
  std::vector<double> biases;
};

std::vector<LayerParams> unflatten(const NetworkSpec& spec, std::span<const double> theta);
std::vector<double> flatten(const NetworkSpec& spec, const std::vector<LayerParams>& layers);

/// Per-layer evaluation cache: act[l] = h^(l) for l = 0..H (act[0] is the
/// input, act[H] the scalar output), pre[l] the affine value feeding layer
/// l+1. Reused by the reverse pass.
struct ForwardTrace {
  std::vector<std::vector<double>> act;
  std::vector<std::vector<double>> pre;

  void resize(const NetworkSpec& spec);
  double output() const { return act.back()[0]; }
};

/// Evaluates h^(H)(x, theta), filling the trace.
double forward(const NetworkSpec& spec, std::span<const double> theta, std::span<const double> x,
               ForwardTrace& trace);
double forward(const NetworkSpec& spec, std::span<const double> theta, std::span<const double> x);

/// Gaussian weights with standard deviation 1/sqrt(fan_in), zero biases.
std::vector<double> init_theta(const NetworkSpec& spec, std::uint64_t seed);

}  // namespace fp
