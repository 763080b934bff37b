#include "kernels_impl.hpp"

namespace a3w::simd::detail {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
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

const KernelTable& scalar_table() {
  static const KernelTable t{dot, axpy, gemv, gemv_t, ger};
  return t;
}

}  // namespace a3w::simd::detail
