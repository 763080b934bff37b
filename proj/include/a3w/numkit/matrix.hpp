#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace a3w {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles. Construction rejects non-finite entries;
// in-place mutation through data()/row() is the caller's responsibility.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  bool same_shape(const Matrix& other) const { return rows_ == other.rows_ && cols_ == other.cols_; }
  bool all_finite() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);

double norm(std::span<const double> v);
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace a3w
