#pragma once

#include <string>

namespace fp {

enum class Activation { relu, tanh, sigmoid };

double activation_eval(Activation kind, double z);
double activation_deriv(Activation kind, double z);

/// Sobolev regularity order of the activation: relu is order 1, tanh and
/// sigmoid are smooth.
struct Smoothness {
  bool infinite = false;
  int order = 1;
};
Smoothness activation_smoothness(Activation kind);

std::string to_string(Activation kind);
Activation activation_from_string(const std::string& name);

}  // namespace fp
