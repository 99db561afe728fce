#include "fp/band.hpp"

#include <stdexcept>

namespace fp {

std::vector<double> residual_energy(const Spectrum& hhat, const Spectrum& fhat) {
  if (hhat.grid != fhat.grid) throw std::invalid_argument("residual_energy: grid mismatch");
  std::vector<double> q(hhat.coeff.size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    const cplx d = hhat.coeff[k] - fhat.coeff[k];
    q[k] = std::norm(d);
  }
  return q;
}

BandEnergies band_split(std::span<const double> q, const BandMask& mask) {
  if (q.size() != static_cast<std::size_t>(mask.grid.m))
    throw std::invalid_argument("band_split: grid mismatch");
  const double dxi = mask.grid.freq_resolution();
  BandEnergies e;
  for (int idx = 0; idx < mask.grid.m; ++idx) {
    const double term = q[idx] * dxi;
    if (mask.is_low(idx))
      e.low += term;
    else
      e.high += term;
  }
  return e;
}

double bin_integral(std::span<const double> v, const Grid& grid) {
  const double dxi = grid.freq_resolution();
  double s = 0.0;
  for (double x : v) s += x * dxi;
  return s;
}

double bracket_weighted_norm(std::span<const double> v, const Grid& grid, int m, int p) {
  if (p != 1 && p != 2) throw std::invalid_argument("bracket norm: p must be 1 or 2");
  if (m < 0) throw std::invalid_argument("bracket norm: m must be nonnegative");
  const double dxi = grid.freq_resolution();
  double s = 0.0;
  for (int idx = 0; idx < grid.m; ++idx) {
    const double w = std::pow(japanese_bracket(grid.freq(idx)), m * p);
    const double a = std::abs(v[idx]);
    s += w * (p == 1 ? a : a * a) * dxi;
  }
  return p == 1 ? s : std::sqrt(s);
}

}  // namespace fp
