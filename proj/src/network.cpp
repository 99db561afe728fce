#include "fp/network.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace fp {

void NetworkSpec::validate() const {
  if (widths.size() < 2) throw std::invalid_argument("network needs at least input and output layers");
  for (int n : widths)
    if (n < 1) throw std::invalid_argument("layer widths must be positive");
  if (widths.back() != 1) throw std::invalid_argument("output width must be 1");
}

std::size_t network_size(const NetworkSpec& spec) {
  spec.validate();
  std::size_t n = 0;
  for (int l = 0; l + 1 < static_cast<int>(spec.widths.size()); ++l)
    n += static_cast<std::size_t>(spec.widths[l] + 1) * spec.widths[l + 1];
  return n;
}

ThetaLayout ThetaLayout::build(const NetworkSpec& spec) {
  spec.validate();
  ThetaLayout layout;
  std::size_t off = 0;
  for (int l = 0; l + 1 < static_cast<int>(spec.widths.size()); ++l) {
    Block b;
    b.rows = spec.widths[l + 1];
    b.cols = spec.widths[l];
    b.weights = off;
    off += static_cast<std::size_t>(b.rows) * b.cols;
    b.biases = off;
    off += b.rows;
    layout.blocks.push_back(b);
  }
  layout.size = off;
  return layout;
}

std::vector<LayerParams> unflatten(const NetworkSpec& spec, std::span<const double> theta) {
  const ThetaLayout layout = ThetaLayout::build(spec);
  if (theta.size() != layout.size) throw std::invalid_argument("theta length does not match spec");
  std::vector<LayerParams> layers;
  layers.reserve(layout.blocks.size());
  for (const auto& b : layout.blocks) {
    LayerParams p;
    p.weights.assign(theta.begin() + b.weights, theta.begin() + b.weights + std::size_t(b.rows) * b.cols);
    p.biases.assign(theta.begin() + b.biases, theta.begin() + b.biases + b.rows);
    layers.push_back(std::move(p));
  }
  return layers;
}

std::vector<double> flatten(const NetworkSpec& spec, const std::vector<LayerParams>& layers) {
  const ThetaLayout layout = ThetaLayout::build(spec);
  if (layers.size() != layout.blocks.size()) throw std::invalid_argument("layer count mismatch");
  std::vector<double> theta(layout.size);
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& b = layout.blocks[l];
    if (layers[l].weights.size() != std::size_t(b.rows) * b.cols || layers[l].biases.size() != std::size_t(b.rows))
      throw std::invalid_argument("layer block shape mismatch");
    std::copy(layers[l].weights.begin(), layers[l].weights.end(), theta.begin() + b.weights);
    std::copy(layers[l].biases.begin(), layers[l].biases.end(), theta.begin() + b.biases);
  }
  return theta;
}

void ForwardTrace::resize(const NetworkSpec& spec) {
  const int h = spec.depth();
  act.resize(h + 1);
  pre.resize(h);
  for (int l = 0; l <= h; ++l) act[l].resize(spec.widths[l]);
  for (int l = 0; l < h; ++l) pre[l].resize(spec.widths[l + 1]);
}

double forward(const NetworkSpec& spec, std::span<const double> theta, std::span<const double> x,
               ForwardTrace& trace) {
  const ThetaLayout layout = ThetaLayout::build(spec);
  if (theta.size() != layout.size) throw std::invalid_argument("theta length does not match spec");
  if (x.size() != static_cast<std::size_t>(spec.input_dim()))
    throw std::invalid_argument("input dimension mismatch");
  trace.resize(spec);

  std::copy(x.begin(), x.end(), trace.act[0].begin());
  const int h = spec.depth();
  for (int l = 0; l < h; ++l) {
    const auto& b = layout.blocks[l];
    const double* w = theta.data() + b.weights;
    const double* bias = theta.data() + b.biases;
    const auto& in = trace.act[l];
    auto& z = trace.pre[l];
    for (int i = 0; i < b.rows; ++i) {
      double s = bias[i];
      const double* wrow = w + std::size_t(i) * b.cols;
      for (int j = 0; j < b.cols; ++j) s += wrow[j] * in[j];
      z[i] = s;
    }
    auto& out = trace.act[l + 1];
    if (l + 1 < h) {
      for (int i = 0; i < b.rows; ++i) out[i] = activation_eval(spec.activation, z[i]);
    } else {
      for (int i = 0; i < b.rows; ++i) out[i] = z[i];  // affine output layer
    }
  }
  return trace.output();
}

double forward(const NetworkSpec& spec, std::span<const double> theta, std::span<const double> x) {
  ForwardTrace trace;
  return forward(spec, theta, x, trace);
}

std::vector<double> init_theta(const NetworkSpec& spec, std::uint64_t seed) {
  const ThetaLayout layout = ThetaLayout::build(spec);
  std::vector<double> theta(layout.size, 0.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (const auto& b : layout.blocks) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(b.cols));
    for (std::size_t i = 0; i < std::size_t(b.rows) * b.cols; ++i)
      theta[b.weights + i] = scale * gauss(rng);
    // biases stay zero
  }
  return theta;
}

}  // namespace fp
