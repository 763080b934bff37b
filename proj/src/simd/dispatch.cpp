#include <atomic>
#include <cstdlib>
#include <string>

#include "a3w/error.hpp"
#include "kernels_impl.hpp"

namespace a3w::simd {
namespace {

bool probe_avx2() {
#if defined(A3W_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

bool cpu_has_avx2() {
  static const bool has = probe_avx2();
  return has;
}

Backend detect() {
  if (const char* env = std::getenv("A3W_SIMD"); env && std::string(env) == "scalar") {
    return Backend::scalar;
  }
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{detect()};
  return b;
}

const KernelTable* lookup(Backend backend);

std::atomic<const KernelTable*>& current_table() {
  static std::atomic<const KernelTable*> t{lookup(current().load())};
  return t;
}

}  // namespace

bool available(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
      return cpu_has_avx2();
  }
  return false;
}

namespace {

const KernelTable* lookup(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return &detail::scalar_table();
    case Backend::avx2:
#if defined(A3W_HAVE_AVX2)
      if (cpu_has_avx2()) return &detail::avx2_table();
#endif
      break;
  }
  return nullptr;
}

}  // namespace

const KernelTable& table(Backend backend) {
  if (const KernelTable* t = lookup(backend)) return *t;
  throw StateError("SIMD backend not available on this CPU: " + std::string(name(backend)));
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_active_backend(Backend backend) {
  const KernelTable& t = table(backend);
  current().store(backend, std::memory_order_relaxed);
  current_table().store(&t, std::memory_order_relaxed);
}

const KernelTable& active() { return *current_table().load(std::memory_order_relaxed); }

std::string_view name(Backend backend) {
  return backend == Backend::avx2 ? "avx2" : "scalar";
}

}  // namespace a3w::simd
