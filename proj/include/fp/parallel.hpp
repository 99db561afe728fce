#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fp {

/// Execution policy for the data-parallel kernels. Every kernel has a serial
/// path and an OpenMP path that produce bit-identical results: work is split
/// into chunks whose boundaries depend only on the problem size, each chunk
/// accumulates locally, and partials are reduced in fixed chunk order.
enum class Exec { serial, openmp };

struct ChunkPlan {
  std::size_t n = 0;
  std::size_t chunk = 1;

  std::size_t count() const { return n == 0 ? 0 : (n + chunk - 1) / chunk; }
  std::size_t begin(std::size_t c) const { return c * chunk; }
  std::size_t end(std::size_t c) const {
    std::size_t e = (c + 1) * chunk;
    return e < n ? e : n;
  }
};

/// fn(chunk_id, begin, end). Chunks may run concurrently; chunk ids are stable.
template <class Fn>
void for_each_chunk(const ChunkPlan& plan, Exec exec, Fn&& fn) {
  const auto nc = static_cast<std::ptrdiff_t>(plan.count());
#ifdef _OPENMP
  if (exec == Exec::openmp) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
      const auto cc = static_cast<std::size_t>(c);
      fn(cc, plan.begin(cc), plan.end(cc));
    }
    return;
  }
#else
  (void)exec;
#endif
  for (std::ptrdiff_t c = 0; c < nc; ++c) {
    const auto cc = static_cast<std::size_t>(c);
    fn(cc, plan.begin(cc), plan.end(cc));
  }
}

/// fn(i) with every index writing its own output slot; no reduction involved,
/// so any schedule is deterministic.
template <class Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
  const auto nn = static_cast<std::ptrdiff_t>(n);
#ifdef _OPENMP
  if (exec == Exec::openmp) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < nn; ++i) fn(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)exec;
#endif
  for (std::ptrdiff_t i = 0; i < nn; ++i) fn(static_cast<std::size_t>(i));
}

}  // namespace fp
