#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include "fp/grid.hpp"

namespace fp {

using cplx = std::complex<double>;

/// Discrete Fourier coefficients with a physical frequency axis.
///
/// coeff[idx] approximates the continuous transform
///   g^(xi) = \int g(x) e^{-2 pi i xi x} dx
/// at xi = (idx - m/2) / (hi - lo), with the normalization
///   coeff = dx * sum_j g(x_j) e^{-2 pi i xi x_j}.
/// Frequencies are in cycles per unit length.
struct Spectrum {
  Grid grid;
  std::vector<cplx> coeff;

  double freq(int idx) const { return grid.freq(idx); }
  int size() const { return grid.m; }
  const cplx& at_bin(int k) const { return coeff[grid.index_of_bin(k)]; }
};

/// In-place radix-2 FFT, unnormalized: X_k = sum_j x_j e^{-+2 pi i jk / n}.
/// n must be a power of two.
void fft_radix2(std::span<cplx> data, bool inverse);

Spectrum dft(const SampledField& field);
SampledField idft(const Spectrum& spectrum);

/// Text export: one row per bin, columns (k, xi, re, im, abs), 17 significant
/// digits.
void write_spectrum(std::ostream& os, const Spectrum& spectrum);

}  // namespace fp
