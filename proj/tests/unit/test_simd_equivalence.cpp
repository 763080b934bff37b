#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "a3w/numkit/rng.hpp"
#include "a3w/simd/kernels.hpp"

using namespace a3w;
using simd::Backend;

namespace {

std::vector<double> random_vec(RngStream& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.gaussian();
  return v;
}

void check_close(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a[i] - b[i]) <= 1e-12 * std::max(1.0, std::abs(a[i])));
  }
}

}  // namespace

TEST_CASE("scalar backend is always available") {
  CHECK(simd::available(Backend::scalar));
  CHECK(simd::name(Backend::scalar) == "scalar");
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (!simd::available(Backend::avx2)) {
    MESSAGE("AVX2 not available; skipping equivalence check");
    return;
  }
  const auto& ref = simd::table(Backend::scalar);
  const auto& vec = simd::table(Backend::avx2);
  RngStream rng(2024, 0);
  // Sizes straddle the 4- and 8-wide main loops and their tails.
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 129u}) {
    const auto a = random_vec(rng, n);
    const auto b = random_vec(rng, n);
    const double d_ref = ref.dot(a.data(), b.data(), n);
    const double d_vec = vec.dot(a.data(), b.data(), n);
    CHECK(std::abs(d_ref - d_vec) <= 1e-12 * std::max(1.0, std::abs(d_ref)));

    auto y_ref = b, y_vec = b;
    ref.axpy(0.37, a.data(), y_ref.data(), n);
    vec.axpy(0.37, a.data(), y_vec.data(), n);
    check_close(y_ref, y_vec);

    for (std::size_t rows : {1u, 3u, 6u}) {
      const auto w = random_vec(rng, rows * n);
      const auto bias = random_vec(rng, rows);
      const auto g = random_vec(rng, rows);
      std::vector<double> out_ref(rows), out_vec(rows);
      ref.gemv(w.data(), rows, n, a.data(), bias.data(), out_ref.data());
      vec.gemv(w.data(), rows, n, a.data(), bias.data(), out_vec.data());
      check_close(out_ref, out_vec);

      auto t_ref = b, t_vec = b;
      ref.gemv_t(w.data(), rows, n, g.data(), t_ref.data());
      vec.gemv_t(w.data(), rows, n, g.data(), t_vec.data());
      check_close(t_ref, t_vec);

      auto w_ref = w, w_vec = w;
      ref.ger(-0.5, g.data(), rows, a.data(), n, w_ref.data());
      vec.ger(-0.5, g.data(), rows, a.data(), n, w_vec.data());
      check_close(w_ref, w_vec);
    }
  }
}

TEST_CASE("active backend can be switched and restored") {
  const Backend before = simd::active_backend();
  simd::set_active_backend(Backend::scalar);
  CHECK(simd::active_backend() == Backend::scalar);
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  CHECK(simd::dot(a, b) == 32.0);
  simd::set_active_backend(before);
  CHECK(simd::active_backend() == before);
}
