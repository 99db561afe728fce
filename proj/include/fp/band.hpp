#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "fp/spectrum.hpp"

namespace fp {

/// Frequency ball |xi| <= eta and its complement on a grid's bin axis.
struct BandMask {
  Grid grid;
  double eta = 0.0;

  bool is_low(int idx) const { return std::abs(grid.freq(idx)) <= eta; }
};

/// Per-bin residual energy q(xi_k) = |hhat_k - fhat_k|^2.
std::vector<double> residual_energy(const Spectrum& hhat, const Spectrum& fhat);

/// Low/high band integrals of per-bin energies, each accumulated in bin order.
/// total() is defined as low + high; the library uses it as the banded total
/// everywhere so the decomposition identity holds exactly.
struct BandEnergies {
  double low = 0.0;
  double high = 0.0;
  double total() const { return low + high; }
};

BandEnergies band_split(std::span<const double> q, const BandMask& mask);

/// Single-accumulator integral sum(v_k) * dxi in bin order.
double bin_integral(std::span<const double> v, const Grid& grid);

inline double japanese_bracket(double xi) { return std::sqrt(1.0 + xi * xi); }

/// ( sum <xi_k>^{m p} |v_k|^p dxi )^{1/p} for p in {1, 2}; v holds per-bin
/// magnitudes.
double bracket_weighted_norm(std::span<const double> v, const Grid& grid, int m, int p);

}  // namespace fp
