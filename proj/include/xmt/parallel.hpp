#pragma once

// Deterministic parallel primitives. Every reduction here partitions the
// index range into fixed-size blocks, accumulates each block serially, and
// combines the per-block results in a fixed pairwise order. The result is
// bit-identical for any worker count, including the serial build.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace xmt::par {

void set_threads(int n);
int thread_count();

inline constexpr std::size_t kBlock = 4096;

// Pairwise (tree) reduction in fixed order.
inline double pairwise_sum(std::vector<double>& a) {
  std::size_t len = a.size();
  if (len == 0) return 0.0;
  while (len > 1) {
    const std::size_t half = len / 2;
    for (std::size_t i = 0; i < half; ++i) a[i] = a[2 * i] + a[2 * i + 1];
    if (len % 2 == 1) {
      a[half] = a[len - 1];
      len = half + 1;
    } else {
      len = half;
    }
  }
  return a[0];
}

template <class F>
double block_sum(std::size_t n, F&& f, std::size_t block = kBlock) {
  if (n == 0) return 0.0;
  const std::size_t nb = (n + block - 1) / block;
  std::vector<double> partial(nb, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(nb); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * block;
    const std::size_t hi = lo + block < n ? lo + block : n;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  return pairwise_sum(partial);
}

// Plain left-to-right accumulation; the serial reference used in tests and
// the benchmark target.
template <class F>
double serial_sum(std::size_t n, F&& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += f(i);
  return s;
}

// Maximum of f over [0,n) with the smallest attaining index. Exact (no
// floating reassociation), so parallel and serial agree bitwise.
template <class F>
std::pair<double, std::size_t> block_max(std::size_t n, F&& f, std::size_t block = kBlock) {
  if (n == 0) return {0.0, 0};
  const std::size_t nb = (n + block - 1) / block;
  std::vector<double> bval(nb);
  std::vector<std::size_t> bidx(nb);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(nb); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * block;
    const std::size_t hi = lo + block < n ? lo + block : n;
    double best = f(lo);
    std::size_t besti = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
      const double v = f(i);
      if (v > best) {
        best = v;
        besti = i;
      }
    }
    bval[static_cast<std::size_t>(b)] = best;
    bidx[static_cast<std::size_t>(b)] = besti;
  }
  double best = bval[0];
  std::size_t besti = bidx[0];
  for (std::size_t b = 1; b < nb; ++b) {
    if (bval[b] > best) {
      best = bval[b];
      besti = bidx[b];
    }
  }
  return {best, besti};
}

template <class F>
void parallel_for(std::size_t n, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    f(static_cast<std::size_t>(i));
  }
}

// Dynamic schedule for uneven work items; results must be written to
// per-index slots by the callee.
template <class F>
void parallel_for_dynamic(std::size_t n, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    f(static_cast<std::size_t>(i));
  }
}

}  // namespace xmt::par
