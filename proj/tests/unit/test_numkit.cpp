#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "a3w/error.hpp"
#include "a3w/numkit/finite_diff.hpp"
#include "a3w/numkit/matrix.hpp"
#include "a3w/numkit/rng.hpp"
#include "a3w/numkit/softmax.hpp"

using namespace a3w;

namespace {

Matrix random_matrix(RngStream& rng, std::size_t r, std::size_t c) {
  std::vector<double> v(r * c);
  for (auto& x : v) x = 2.0 * rng.uniform() - 1.0;
  return Matrix(r, c, std::move(v));
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

TEST_CASE("matmul") {
  const Matrix m = Matrix::from_rows({{5, 6}, {7, 8}});
  CHECK(matmul(Matrix::identity(2), m) == m);
  CHECK(matmul(Matrix(2, 2), m) == Matrix(2, 2));
  CHECK(matmul(Matrix::from_rows({{1, 2}, {3, 4}}), m) == Matrix::from_rows({{19, 22}, {43, 50}}));
  CHECK_THROWS_AS(matmul(Matrix(2, 3), Matrix(2, 3)), ShapeError);
}

TEST_CASE("matmul is associative on random 8x8 matrices") {
  RngStream rng(11, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = random_matrix(rng, 8, 8), b = random_matrix(rng, 8, 8), c = random_matrix(rng, 8, 8);
    const Matrix left = matmul(matmul(a, b), c);
    const Matrix right = matmul(a, matmul(b, c));
    for (std::size_t i = 0; i < left.size(); ++i) {
      const double scale = std::max(1.0, std::abs(left.values()[i]));
      CHECK(std::abs(left.values()[i] - right.values()[i]) / scale < 1e-9);
    }
  }
}

TEST_CASE("matrix construction rejects bad input") {
  CHECK_THROWS_AS(Matrix(2, 2, {1.0, 2.0, 3.0}), ShapeError);
  CHECK_THROWS_AS(Matrix(1, 2, {1.0, std::numeric_limits<double>::quiet_NaN()}), NumericError);
  CHECK_THROWS_AS(Matrix(1, 1, {std::numeric_limits<double>::infinity()}), NumericError);
}

TEST_CASE("stable_softmax examples") {
  for (double t : {0.0, 0.5, 7.0}) {
    const auto w = stable_softmax(std::vector<double>{2.5, 2.5, 2.5}, t);
    for (double x : w) CHECK(x == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
  const auto uniform = stable_softmax(std::vector<double>{-3.0, 0.1, 9.0, 4.0}, 0.0);
  for (double x : uniform) CHECK(x == 0.25);
  // e^{ln 3} = 3, so weights are 3/4 and 1/4.
  const auto w = stable_softmax(std::vector<double>{1.0, 0.0}, std::log(3.0));
  CHECK(w[0] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_THROWS_AS(stable_softmax(std::vector<double>{}, 1.0), DomainError);
  CHECK_THROWS_AS(stable_softmax(std::vector<double>{1.0}, -1.0), DomainError);
}

TEST_CASE("stable_softmax properties") {
  RngStream rng(5, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(20);
    const double magnitude = trial % 2 ? 1e3 : 1.0;
    std::vector<double> v(n);
    for (auto& x : v) x = magnitude * (2.0 * rng.uniform() - 1.0);
    const double t = 20.0 * rng.uniform();
    const auto w = stable_softmax(v, t);
    CHECK(std::abs(sum(w) - 1.0) < 1e-12);
    // Strict positivity only holds while the spread of t*v stays above exp underflow.
    const bool representable = magnitude * t < 300.0;
    for (double x : w) {
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
      if (representable) CHECK(x > 0.0);
    }

    std::vector<double> shifted(v);
    for (auto& x : shifted) x += 17.25;
    const auto ws = stable_softmax(shifted, t);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ws[i] - w[i]) < 1e-12);

    std::vector<double> reversed(v.rbegin(), v.rend());
    const auto wr = stable_softmax(reversed, t);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(wr[n - 1 - i] - w[i]) < 1e-12);
  }
}

TEST_CASE("finite_diff_grad examples") {
  const std::vector<double> x{0.3, -1.2, 4.0, 2.2};
  const auto ones = finite_diff_grad(
      [](std::span<const double> p) {
        double s = 0.0;
        for (double v : p) s += v;
        return s;
      },
      x, 1e-5);
  for (double g : ones) CHECK(std::abs(g - 1.0) < 1e-8);

  const auto zeros = finite_diff_grad([](std::span<const double>) { return 42.0; }, x, 1e-5);
  for (double g : zeros) CHECK(std::abs(g) < 1e-10);

  const auto six = finite_diff_grad([](std::span<const double> p) { return p[0] * p[0]; },
                                    std::vector<double>{3.0}, 1e-5);
  CHECK(std::abs(six[0] - 6.0) < 1e-6);

  CHECK_THROWS_AS(finite_diff_grad([](std::span<const double>) { return 0.0; }, x, 0.0), DomainError);
}

TEST_CASE("finite_diff_grad reports the offending coordinate") {
  const std::vector<double> x{1.0, 0.0, 2.0};
  try {
    finite_diff_grad([](std::span<const double> p) { return std::log(p[1] > 0 ? p[1] : -1.0) + p[0]; }, x,
                     1e-5);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    REQUIRE(e.index().has_value());
    CHECK(*e.index() == 0);
  }
  try {
    finite_diff_grad(
        [](std::span<const double> p) { return p[2] > 2.0 ? std::numeric_limits<double>::infinity() : p[2]; },
        x, 1e-5);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(*e.index() == 2);
  }
}

TEST_CASE("finite_diff_grad matches cubic polynomials") {
  RngStream rng(3, 2);
  for (int trial = 0; trial < 100; ++trial) {
    // f(x) = sum_i c3_i x_i^3 + c2_i x_i^2 + c1_i x_i + k * x_0 x_1 x_2
    std::vector<double> c3(3), c2(3), c1(3), x(3);
    for (int i = 0; i < 3; ++i) {
      c3[i] = rng.gaussian();
      c2[i] = rng.gaussian();
      c1[i] = rng.gaussian();
      x[i] = 2.0 * rng.gaussian();
    }
    const double k = rng.gaussian();
    auto f = [&](std::span<const double> p) {
      double s = k * p[0] * p[1] * p[2];
      for (int i = 0; i < 3; ++i) s += c3[i] * p[i] * p[i] * p[i] + c2[i] * p[i] * p[i] + c1[i] * p[i];
      return s;
    };
    std::vector<double> analytic(3);
    for (int i = 0; i < 3; ++i) {
      analytic[i] = 3 * c3[i] * x[i] * x[i] + 2 * c2[i] * x[i] + c1[i];
    }
    analytic[0] += k * x[1] * x[2];
    analytic[1] += k * x[0] * x[2];
    analytic[2] += k * x[0] * x[1];
    const auto numeric = finite_diff_grad(f, x, 1e-5);
    CHECK(max_relative_error(analytic, numeric) < 1e-6);
  }
}

TEST_CASE("philox matches the reference known-answer vectors") {
  const auto zero = RngStream(0, 0).block(0);
  CHECK(zero[0] == 0x6627e8d5u);
  CHECK(zero[1] == 0xe169c58du);
  CHECK(zero[2] == 0xbc57ac4cu);
  CHECK(zero[3] == 0x9b00dbd8u);
  const auto ones = RngStream(~0ull, ~0ull).block(~0ull);
  CHECK(ones[0] == 0x408f276du);
  CHECK(ones[1] == 0x41c83b0eu);
  CHECK(ones[2] == 0xa20bc7c6u);
  CHECK(ones[3] == 0x6d5451fdu);
}

TEST_CASE("rng_gaussian determinism and stream separation") {
  RngStream a(42, 0), b(42, 0), c(42, 1);
  const auto da = rng_gaussian(a, 64);
  const auto db = rng_gaussian(b, 64);
  const auto dc = rng_gaussian(c, 16);
  CHECK(da == db);
  CHECK(a.counter() == 64);
  for (std::size_t i = 0; i < 16; ++i) CHECK(da[i] != dc[i]);

  // Output is addressable by counter.
  RngStream mid(42, 0, 10);
  CHECK(mid.gaussian() == da[10]);
}

TEST_CASE("rng_gaussian moments") {
  RngStream rng(7, 3);
  const std::size_t n = 100000;
  const auto draws = rng_gaussian(rng, n);
  double mean = 0.0, sq = 0.0;
  for (double d : draws) {
    mean += d;
    sq += d * d;
  }
  mean /= n;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(sq / n - 1.0) < 0.03);
}

TEST_CASE("uniform_index stays in range and covers it") {
  RngStream rng(1, 9);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto k = rng.uniform_index(7);
    REQUIRE(k < 7);
    ++counts[k];
  }
  // 3 sigma of Binomial(70000, 1/7) is ~278.
  for (int c : counts) CHECK(std::abs(c - 10000) < 280);
  CHECK(rng.uniform_index(1) == 0);
}

TEST_CASE("substreams are distinct and reproducible") {
  const RngStream base(8, 4);
  auto s1 = base.substream(1);
  auto s2 = base.substream(2);
  CHECK(s1 == base.substream(1));
  CHECK(s1.stream_id() != s2.stream_id());
  CHECK(s1.next_u64() != s2.next_u64());
}
