#pragma once

#include <span>
#include <vector>

#include "a3w/anchors/anchor_set.hpp"
#include "a3w/datagen/dataset.hpp"
#include "a3w/model/params.hpp"

namespace a3w {

enum class AlignmentKind { cosine, squared_distance };

struct ObjectiveConfig {
  double lambda = 0.1;
  double tau = 10.0;
  AlignmentKind alignment = AlignmentKind::cosine;
  // Treat the softmax weights as constants when differentiating.
  bool stop_gradient_weights = true;
  // Replace the softmax weights with 1/N (the "without weighted loss" ablation).
  bool uniform_weights = false;

  void validate() const;
};

struct BatchLosses {
  std::vector<double> alignment;      // L_i
  std::vector<double> weights;        // w_i
  std::vector<double> cross_entropy;  // CE of g(f(x_i)) against the observed label
  std::vector<std::size_t> predictions;
  double total = 0.0;
  ModelParams grad;

  double weight_sum() const;
};

// sum_i w_i (lambda L_i + CE_i), where L_i aligns Proj_{y_i}(f(x_i)) with the
// anchor of the observed label y_i and w = softmax(-tau L). Gradients cover
// every parameter; projector gradients are non-zero only through L.
BatchLosses total_loss(std::span<const Sample> batch, const ModelParams& params, const AnchorSet& anchors,
                       const ObjectiveConfig& cfg);

struct WarmupBatch {
  double total = 0.0;
  std::vector<double> cross_entropy;
  ModelParams grad;  // projector entries are zero
};

WarmupBatch warmup_batch_loss(std::span<const Sample> batch, const ModelParams& params, bool mean_reduce = false);

}  // namespace a3w
