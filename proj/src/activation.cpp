#include "fp/activation.hpp"

#include <cmath>
#include <stdexcept>

namespace fp {

double activation_eval(Activation kind, double z) {
  switch (kind) {
    case Activation::relu:
      return z > 0.0 ? z : 0.0;
    case Activation::tanh:
      return std::tanh(z);
    case Activation::sigmoid:
      return 1.0 / (1.0 + std::exp(-z));
  }
  throw std::logic_error("unknown activation");
}

double activation_deriv(Activation kind, double z) {
  switch (kind) {
    case Activation::relu:
      // subgradient choice: 0 at the kink
      return z > 0.0 ? 1.0 : 0.0;
    case Activation::tanh: {
      const double t = std::tanh(z);
      return 1.0 - t * t;
    }
    case Activation::sigmoid: {
      const double s = 1.0 / (1.0 + std::exp(-z));
      return s * (1.0 - s);
    }
  }
  throw std::logic_error("unknown activation");
}

Smoothness activation_smoothness(Activation kind) {
  if (kind == Activation::relu) return {false, 1};
  return {true, 0};
}

std::string to_string(Activation kind) {
  switch (kind) {
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
  }
  throw std::logic_error("unknown activation");
}

Activation activation_from_string(const std::string& name) {
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  if (name == "sigmoid") return Activation::sigmoid;
  throw std::invalid_argument("unknown activation: " + name);
}

}  // namespace fp
