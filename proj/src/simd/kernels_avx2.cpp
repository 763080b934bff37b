// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "kernels_impl.hpp"

namespace a3w::simd::detail {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void gemv(const double* w, std::size_t rows, std::size_t cols, const double* x, const double* bias,
          double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] = dot(w + r * cols, x, cols) + (bias ? bias[r] : 0.0);
  }
}

void gemv_t(const double* w, std::size_t rows, std::size_t cols, const double* g, double* out) {
  for (std::size_t r = 0; r < rows; ++r) axpy(g[r], w + r * cols, out, cols);
}

void ger(double alpha, const double* u, std::size_t rows, const double* v, std::size_t cols,
         double* w) {
  for (std::size_t r = 0; r < rows; ++r) axpy(alpha * u[r], v, w + r * cols, cols);
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{dot, axpy, gemv, gemv_t, ger};
  return t;
}

}  // namespace a3w::simd::detail
