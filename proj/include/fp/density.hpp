#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fp/bump.hpp"
#include "fp/grid.hpp"

namespace fp {

/// Population density of the data measure, d mu = rho dx. uniform_on is the
/// boxcar 1/(hi-lo) on an interval; truncated_constant is proportional to the
/// bump cutoff (so sqrt(rho) inherits the profile's regularity).
struct PopulationDensity {
  enum class Kind { uniform_on, truncated_constant };

  Kind kind = Kind::uniform_on;
  double lo = -3.14;
  double hi = 3.14;
  BumpFunction bump;  // used by truncated_constant

  void validate() const;

  /// Density sampled on the grid and rescaled so the grid quadrature
  /// sum(rho_j) * dx equals 1 exactly.
  std::vector<double> sample_normalized(const Grid& grid) const;

  /// Deterministic i.i.d. draws from the measure.
  std::vector<double> draw_samples(int count, std::uint64_t seed) const;

  /// Essential bound of the normalized density (Assumption check reporting).
  double sup_bound() const;

  bool operator==(const PopulationDensity&) const = default;
};

std::string to_string(PopulationDensity::Kind k);
PopulationDensity::Kind density_kind_from_string(const std::string& name);

}  // namespace fp
