#include "a3w/anchors/anchor_set.hpp"

#include <cmath>
#include <set>

#include "a3w/error.hpp"
#include "a3w/numkit/rng.hpp"
#include "a3w/simd/kernels.hpp"

namespace a3w {
namespace {

void validate_names(const std::vector<std::string>& names) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) throw InputError("empty class name");
    if (n.find_first_of(" \t\r\n") != std::string::npos) {
      throw InputError("class name contains whitespace: '" + n + "'");
    }
    if (!seen.insert(n).second) throw InputError("duplicate class name: " + n);
  }
}

}  // namespace

AnchorSet::AnchorSet(std::vector<std::string> class_names, Matrix anchors)
    : names_(std::move(class_names)), anchors_(std::move(anchors)) {
  if (anchors_.rows() < 2) throw InputError("an anchor set needs at least 2 classes");
  if (names_.size() != anchors_.rows()) throw ShapeError("class name count does not match anchor rows");
  if (anchors_.cols() == 0) throw ShapeError("anchor dimension must be >= 1");
  validate_names(names_);
  for (std::size_t c = 0; c < anchors_.rows(); ++c) {
    if (std::abs(norm(anchors_.row(c)) - 1.0) > kUnitTolerance) {
      throw NumericError("anchor row is not unit norm", c);
    }
  }
}

AnchorSet AnchorSet::from_unnormalized(std::vector<std::string> class_names, Matrix raw) {
  for (std::size_t c = 0; c < raw.rows(); ++c) {
    const auto unit = normalize_anchor(raw.row(c));
    std::copy(unit.begin(), unit.end(), raw.row(c).begin());
  }
  return AnchorSet(std::move(class_names), std::move(raw));
}

std::string build_prompt(std::string_view class_name) {
  if (class_name.empty()) throw InputError("empty class name");
  return "a photo of a " + std::string(class_name);
}

std::vector<double> normalize_anchor(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) throw NumericError("cannot normalize a non-finite vector");
  }
  const double n = norm(v);
  if (!(n > 0.0)) throw NumericError("cannot normalize a zero vector");
  std::vector<double> out(v.begin(), v.end());
  for (auto& x : out) x /= n;
  return out;
}

std::vector<std::string> default_class_names(std::size_t count) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < count; ++c) names.push_back("class_" + std::to_string(c));
  return names;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  return simd::dot(a, b) / (norm(a) * norm(b));
}

Matrix random_orthonormal_columns(std::size_t dim, std::size_t k, std::uint64_t seed, std::uint64_t stream) {
  if (k > dim) throw InputError("cannot fit " + std::to_string(k) + " orthonormal columns in dimension " +
                                std::to_string(dim));
  RngStream rng(seed, stream);
  // Work on columns as rows of the transpose, then transpose back.
  Matrix cols(k, dim);
  for (std::size_t j = 0; j < k; ++j) {
    for (;;) {
      auto col = cols.row(j);
      for (auto& x : col) x = rng.gaussian();
      for (std::size_t i = 0; i < j; ++i) {
        const double proj = simd::dot(col, cols.row(i));
        simd::axpy(-proj, cols.row(i), col);
      }
      const double n = norm(col);
      if (n > 1e-8) {
        for (auto& x : col) x /= n;
        break;
      }
    }
  }
  return transpose(cols);
}

AnchorSet oracle_anchors(const Matrix& prototypes, std::size_t dim, std::uint64_t seed,
                         std::vector<std::string> class_names) {
  const std::size_t count = prototypes.rows();
  const std::size_t k = prototypes.cols();
  if (count < 2) throw InputError("oracle anchors need at least 2 prototypes");
  if (dim < k) throw InputError("anchor dimension must be >= prototype dimension");
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = a + 1; b < count; ++b) {
      const auto ra = prototypes.row(a), rb = prototypes.row(b);
      if (std::equal(ra.begin(), ra.end(), rb.begin())) {
        throw InputError("duplicate prototypes at rows " + std::to_string(a) + " and " + std::to_string(b));
      }
    }
  }
  if (class_names.empty()) class_names = default_class_names(count);

  const Matrix map = random_orthonormal_columns(dim, k, seed, streams::oracle_map);
  // Row c of the result is map * prototype_c.
  Matrix raw = transpose(matmul(map, transpose(prototypes)));
  for (std::size_t c = 0; c < count; ++c) {
    if (!(norm(prototypes.row(c)) > 0.0)) throw InputError("zero prototype at row " + std::to_string(c));
  }
  return AnchorSet::from_unnormalized(std::move(class_names), std::move(raw));
}

}  // namespace a3w
