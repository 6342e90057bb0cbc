#pragma once

// Thin OpenMP layer used by every kernel. Reductions are computed over
// fixed-size blocks whose partial sums are combined in block order, so the
// result is identical no matter how many threads run the loop (or whether
// OpenMP is enabled at all). That determinism is what makes repeated runs of
// the same configuration byte-identical.

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cstdint>
#include <vector>

namespace ccsim::par {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

template <class F>
inline void for_n(int n, F&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int k = 0; k < n; ++k) body(k);
}

inline constexpr int kSumBlock = 2048;

// Deterministic sum of f(0..n-1). Each block is accumulated with Kahan
// compensation; block partials are then folded serially in index order.
template <class F>
inline double sum_n(int n, F&& f) {
  if (n <= 0) return 0.0;
  const int nb = (n + kSumBlock - 1) / kSumBlock;
  std::vector<double> partial(static_cast<size_t>(nb), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int b = 0; b < nb; ++b) {
    const int lo = b * kSumBlock;
    const int hi = (lo + kSumBlock < n) ? lo + kSumBlock : n;
    double s = 0.0, c = 0.0;
    for (int k = lo; k < hi; ++k) {
      const double y = f(k) - c;
      const double t = s + y;
      c = (t - s) - y;
      s = t;
    }
    partial[static_cast<size_t>(b)] = s;
  }
  double s = 0.0, c = 0.0;
  for (int b = 0; b < nb; ++b) {
    const double y = partial[static_cast<size_t>(b)] - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

// Deterministic max (order-independent by nature of max).
template <class F>
inline double max_n(int n, F&& f) {
  double m = -1.7976931348623157e308;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : m)
#endif
  for (int k = 0; k < n; ++k) {
    const double v = f(k);
    if (v > m) m = v;
  }
  return m;
}

template <class F>
inline double min_n(int n, F&& f) {
  double m = 1.7976931348623157e308;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(min : m)
#endif
  for (int k = 0; k < n; ++k) {
    const double v = f(k);
    if (v < m) m = v;
  }
  return m;
}

}  // namespace ccsim::par
