#pragma once

#include <span>
#include <vector>

#include "a3w/numkit/matrix.hpp"

namespace a3w {

struct LossAndGrad {
  double value = 0.0;
  std::vector<double> grad;
};

// -cos(v, a). Gradient wrt v is -(a/|a| - cos * v/|v|) / |v|.
// Throws NumericError when |v| < 1e-12.
LossAndGrad anchor_loss(std::span<const double> v, std::span<const double> a);

// |v - a|^2, gradient 2 (v - a).
LossAndGrad squared_distance_loss(std::span<const double> v, std::span<const double> a);

// w_i = exp(-tau L_i) / sum_j exp(-tau L_j), via the stabilized softmax.
std::vector<double> compute_weights(std::span<const double> costs, double tau);

// Softmax cross-entropy of one row of logits; grad = softmax - onehot.
LossAndGrad cross_entropy(std::span<const double> logits, std::size_t label);

struct WarmupLoss {
  double value = 0.0;
  std::vector<double> per_sample;
  Matrix d_logits;  // N x C
};

// Sum over the batch of the per-sample cross-entropy (or the mean when
// mean_reduce is set). Rows of `logits` are samples.
WarmupLoss warmup_loss(const Matrix& logits, std::span<const std::size_t> labels, bool mean_reduce = false);

}  // namespace a3w
