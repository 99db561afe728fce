#pragma once

#include <span>
#include <vector>

#include "fp/grid.hpp"
#include "fp/spectrum.hpp"

namespace fp {

namespace detail {

/// Per-stage butterfly factors for one transform length, concatenated.
struct TwiddleTable {
  int n;
  std::vector<cplx> w;
  explicit TwiddleTable(int n);
};

void fft_core(std::span<cplx> a, bool inverse, const TwiddleTable& table);

}  // namespace detail

/// Precomputed tables for repeated forward transforms on one grid. Const use
/// is thread safe; callers supply their own output buffers.
class FourierPlan {
 public:
  explicit FourierPlan(const Grid& g);

  /// out <- physical-normalization DFT of in, bins ordered k = -m/2..m/2-1.
  void forward(std::span<const double> in, std::span<cplx> out) const;

  Grid grid;

 private:
  detail::TwiddleTable twiddle_;
  std::vector<cplx> phase_;
};

}  // namespace fp
