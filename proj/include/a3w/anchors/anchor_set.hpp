#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "a3w/numkit/matrix.hpp"

namespace a3w {

// Fixed per-class semantic references: one unit-norm row per class.
class AnchorSet {
 public:
  static constexpr double kUnitTolerance = 1e-9;

  // Rows must already be unit norm (within kUnitTolerance). Requires at least
  // two classes with distinct, non-empty, whitespace-free names.
  AnchorSet(std::vector<std::string> class_names, Matrix anchors);

  // Normalizes every row first; a zero or non-finite row is a NumericError.
  static AnchorSet from_unnormalized(std::vector<std::string> class_names, Matrix raw);

  std::size_t num_classes() const { return anchors_.rows(); }
  std::size_t dim() const { return anchors_.cols(); }
  const std::vector<std::string>& class_names() const { return names_; }
  const Matrix& matrix() const { return anchors_; }
  std::span<const double> anchor(std::size_t c) const { return anchors_.row(c); }

 private:
  std::vector<std::string> names_;
  Matrix anchors_;
};

std::string build_prompt(std::string_view class_name);

std::vector<double> normalize_anchor(std::span<const double> v);

// Default names class_0 ... class_{C-1}.
std::vector<std::string> default_class_names(std::size_t count);

// Embeds each prototype row into dimension `dim` through a seeded map with
// orthonormal columns, then normalizes. Pairwise cosines of the prototypes
// are preserved.
AnchorSet oracle_anchors(const Matrix& prototypes, std::size_t dim, std::uint64_t seed,
                         std::vector<std::string> class_names = {});

// dim x k matrix with orthonormal columns (dim >= k), Gaussian then Gram-Schmidt.
Matrix random_orthonormal_columns(std::size_t dim, std::size_t k, std::uint64_t seed, std::uint64_t stream);

double cosine(std::span<const double> a, std::span<const double> b);

}  // namespace a3w
