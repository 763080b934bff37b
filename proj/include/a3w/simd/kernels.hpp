#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace a3w::simd {

enum class Backend { scalar, avx2 };

// Inner loops used by the dense layers. Every backend implements the same
// table; the scalar one is the reference the others are tested against.
struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = W x + bias   (W is rows x cols, row-major; bias may be null)
  void (*gemv)(const double* w, std::size_t rows, std::size_t cols, const double* x,
               const double* bias, double* y);
  // out += W^T g     (W is rows x cols, g has rows entries, out has cols)
  void (*gemv_t)(const double* w, std::size_t rows, std::size_t cols, const double* g,
                 double* out);
  // W += alpha * u v^T (u has rows entries, v has cols)
  void (*ger)(double alpha, const double* u, std::size_t rows, const double* v, std::size_t cols,
              double* w);
};

const KernelTable& table(Backend backend);
bool available(Backend backend);

// Chosen once at startup: AVX2+FMA when the CPU has it, unless A3W_SIMD=scalar.
Backend active_backend();
void set_active_backend(Backend backend);
const KernelTable& active();

std::string_view name(Backend backend);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace a3w::simd
