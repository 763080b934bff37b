#include "a3w/numkit/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "a3w/error.hpp"
#include "a3w/simd/kernels.hpp"

namespace a3w {

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw ShapeError("matrix " + std::to_string(rows) + "x" + std::to_string(cols) + " given " +
                     std::to_string(values_.size()) + " values");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw NumericError("non-finite matrix entry", i);
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> values;
  values.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeError("ragged row in matrix literal");
    values.insert(values.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(values));
}

bool Matrix::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  Matrix out(a.rows(), b.cols());
  const auto& k = simd::active();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* dst = out.row(i).data();
    for (std::size_t j = 0; j < a.cols(); ++j) k.axpy(a(i, j), b.row(j).data(), dst, b.cols());
  }
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) t(c, r) = m(r, c);
  }
  return t;
}

double norm(std::span<const double> v) { return std::sqrt(simd::dot(v, v)); }

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw ShapeError("max_abs_diff: shape mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
  }
  return worst;
}

}  // namespace a3w
