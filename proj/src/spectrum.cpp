#include "fp/spectrum.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "fp/fourier_plan.hpp"

namespace fp {

namespace detail {

TwiddleTable::TwiddleTable(int n) : n(n) {
  w.reserve(n > 1 ? n - 1 : 0);
  for (int len = 2; len <= n; len <<= 1) {
    const int half = len / 2;
    for (int j = 0; j < half; ++j)
      w.push_back(std::polar(1.0, -2.0 * std::numbers::pi * j / len));
  }
}

void fft_core(std::span<cplx> a, bool inverse, const TwiddleTable& table) {
  const std::size_t n = a.size();
  if (n != static_cast<std::size_t>(table.n))
    throw std::invalid_argument("fft length does not match twiddle table");
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fft length must be a power of two");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  std::size_t off = 0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < half; ++j) {
        cplx w = table.w[off + j];
        if (inverse) w = std::conj(w);
        const cplx u = a[i + j];
        const cplx v = a[i + j + half] * w;
        a[i + j] = u + v;
        a[i + j + half] = u - v;
      }
    }
    off += half;
  }
}

}  // namespace detail

void fft_radix2(std::span<cplx> data, bool inverse) {
  detail::TwiddleTable table(static_cast<int>(data.size()));
  detail::fft_core(data, inverse, table);
}

FourierPlan::FourierPlan(const Grid& g) : grid(g), twiddle_(g.m) {
  grid.validate();
  const double two_pi = 2.0 * std::numbers::pi;
  phase_.resize(grid.m);
  const double dx = grid.spacing();
  for (int idx = 0; idx < grid.m; ++idx) {
    const int k = grid.bin(idx);
    phase_[idx] = dx * std::polar(1.0, -two_pi * k * grid.lo / grid.length());
  }
}

void FourierPlan::forward(std::span<const double> in, std::span<cplx> out) const {
  const int m = grid.m;
  if (in.size() != static_cast<std::size_t>(m) || out.size() != static_cast<std::size_t>(m))
    throw std::invalid_argument("fourier plan length mismatch");
  for (int j = 0; j < m; ++j) out[j] = cplx(in[j], 0.0);
  detail::fft_core(out, false, twiddle_);
  // fftshift: natural bin r and signed bin k = idx - m/2 differ by a half swap
  const int half = m / 2;
  for (int idx = 0; idx < half; ++idx) std::swap(out[idx], out[idx + half]);
  for (int idx = 0; idx < m; ++idx) out[idx] *= phase_[idx];
}

Spectrum dft(const SampledField& field) {
  FourierPlan plan(field.grid);
  Spectrum s;
  s.grid = field.grid;
  s.coeff.resize(field.grid.m);
  plan.forward(field.values, s.coeff);
  return s;
}

SampledField idft(const Spectrum& spectrum) {
  const Grid& g = spectrum.grid;
  g.validate();
  const int m = g.m;
  if (static_cast<int>(spectrum.coeff.size()) != m)
    throw std::invalid_argument("spectrum length does not match grid");
  const double two_pi = 2.0 * std::numbers::pi;

  std::vector<cplx> buf(m);
  for (int idx = 0; idx < m; ++idx) {
    const int k = g.bin(idx);
    const int r = (k + m) % m;
    buf[r] = spectrum.coeff[idx] * std::polar(1.0, two_pi * k * g.lo / g.length());
  }
  fft_radix2(buf, true);

  SampledField out(g);
  const double dxi = g.freq_resolution();
  for (int j = 0; j < m; ++j) out.values[j] = buf[j].real() * dxi;
  return out;
}

void write_spectrum(std::ostream& os, const Spectrum& spectrum) {
  os << "# k xi re im abs\n";
  char line[256];
  for (int idx = 0; idx < spectrum.size(); ++idx) {
    const cplx& c = spectrum.coeff[idx];
    std::snprintf(line, sizeof(line), "%d %.17g %.17g %.17g %.17g\n", spectrum.grid.bin(idx),
                  spectrum.freq(idx), c.real(), c.imag(), std::abs(c));
    os << line;
  }
}

}  // namespace fp
