#include "a3w/objective/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "a3w/error.hpp"
#include "a3w/numkit/softmax.hpp"
#include "a3w/simd/kernels.hpp"

namespace a3w {

LossAndGrad anchor_loss(std::span<const double> v, std::span<const double> a) {
  if (v.size() != a.size()) throw ShapeError("projected vector and anchor differ in dimension");
  const double v_norm = norm(v);
  if (!(v_norm >= 1e-12)) throw NumericError("projected feature has (near) zero norm; alignment direction undefined");
  const double a_norm = norm(a);
  const double cos = simd::dot(v, a) / (v_norm * a_norm);
  LossAndGrad out{-cos, std::vector<double>(v.size())};
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.grad[i] = -(a[i] / a_norm - cos * v[i] / v_norm) / v_norm;
  }
  return out;
}

LossAndGrad squared_distance_loss(std::span<const double> v, std::span<const double> a) {
  if (v.size() != a.size()) throw ShapeError("projected vector and anchor differ in dimension");
  LossAndGrad out{0.0, std::vector<double>(v.size())};
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = v[i] - a[i];
    out.value += d * d;
    out.grad[i] = 2.0 * d;
  }
  return out;
}

std::vector<double> compute_weights(std::span<const double> costs, double tau) {
  if (costs.empty()) throw InputError("cannot weight an empty batch");
  std::vector<double> similarity(costs.size());
  std::transform(costs.begin(), costs.end(), similarity.begin(), [](double l) { return -l; });
  return stable_softmax(similarity, tau);
}

LossAndGrad cross_entropy(std::span<const double> logits, std::size_t label) {
  if (label >= logits.size()) {
    throw InputError("label " + std::to_string(label) + " out of range for " + std::to_string(logits.size()) + " classes");
  }
  const auto probs = stable_softmax(logits, 1.0);
  const double peak = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double l : logits) sum += std::exp(l - peak);
  LossAndGrad out{peak + std::log(sum) - logits[label], probs};
  out.grad[label] -= 1.0;
  return out;
}

WarmupLoss warmup_loss(const Matrix& logits, std::span<const std::size_t> labels, bool mean_reduce) {
  if (logits.rows() != labels.size()) throw ShapeError("one label per logit row required");
  WarmupLoss out{0.0, std::vector<double>(labels.size()), Matrix(logits.rows(), logits.cols())};
  const double scale = mean_reduce && !labels.empty() ? 1.0 / static_cast<double>(labels.size()) : 1.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto ce = cross_entropy(logits.row(i), labels[i]);
    out.per_sample[i] = ce.value;
    out.value += scale * ce.value;
    auto row = out.d_logits.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = scale * ce.grad[j];
  }
  return out;
}

}  // namespace a3w
