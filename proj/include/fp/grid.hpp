#pragma once

#include <stdexcept>
#include <vector>

namespace fp {

/// Uniform half-open sampling grid x_j = lo + j*dx, j = 0..m-1, over the
/// truncation domain. m must be a power of two (radix-2 transform).
struct Grid {
  double lo = 0.0;
  double hi = 1.0;
  int m = 0;

  double length() const { return hi - lo; }
  double spacing() const { return length() / m; }
  double node(int j) const { return lo + j * spacing(); }

  /// Frequency-axis resolution in cycles per unit length.
  double freq_resolution() const { return 1.0 / length(); }
  double nyquist() const { return m / (2.0 * length()); }

  /// Signed bin for storage index idx in 0..m-1: k = idx - m/2.
  int bin(int idx) const { return idx - m / 2; }
  double freq(int idx) const { return bin(idx) * freq_resolution(); }
  int index_of_bin(int k) const { return k + m / 2; }

  void validate() const {
    if (m < 2 || (m & (m - 1)) != 0)
      throw std::invalid_argument("grid size must be a power of two >= 2");
    if (!(hi > lo)) throw std::invalid_argument("grid domain must have hi > lo");
  }

  bool operator==(const Grid&) const = default;
};

/// Real-valued function samples on a grid.
struct SampledField {
  Grid grid;
  std::vector<double> values;

  SampledField() = default;
  explicit SampledField(const Grid& g) : grid(g), values(g.m, 0.0) {}
  SampledField(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != g.m)
      throw std::invalid_argument("field length does not match grid");
  }

  bool operator==(const SampledField&) const = default;
};

}  // namespace fp
