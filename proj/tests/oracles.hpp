#pragma once

// Independent straight-line reference implementations used only by tests.
// These deliberately avoid the library's code paths.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "fp/grid.hpp"

namespace oracle {

// O(M^2) transform straight from the defining sum:
// ghat(xi_k) = dx * sum_j g(x_j) exp(-2 pi i xi_k x_j), xi_k = k / (hi - lo).
inline std::vector<std::complex<double>> naive_dft(const fp::SampledField& f) {
  const int m = f.grid.m;
  const double dx = f.grid.spacing();
  std::vector<std::complex<double>> out(m);
  for (int idx = 0; idx < m; ++idx) {
    const double xi = f.grid.freq(idx);
    std::complex<double> acc(0.0, 0.0);
    for (int j = 0; j < m; ++j) {
      const double ang = -2.0 * std::numbers::pi * xi * f.grid.node(j);
      acc += f.values[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[idx] = dx * acc;
  }
  return out;
}

// Central finite difference of a scalar function of one coordinate.
template <class F>
double central_diff(F&& fn, double x, double h) {
  return (fn(x + h) - fn(x - h)) / (2.0 * h);
}

}  // namespace oracle
