#pragma once

#include <span>
#include <vector>

#include "a3w/model/params.hpp"

namespace a3w {

struct ForwardCache {
  std::vector<double> input;
  std::vector<double> hidden_pre;
  std::vector<double> hidden;
  std::vector<double> features;  // z = f(x)
  std::vector<double> logits;    // g(z)
};

ForwardCache forward(const ModelParams& params, std::span<const double> x);

std::vector<double> project(const ModelParams& params, std::size_t c, std::span<const double> z);

// Accumulates parameter gradients for a loss whose derivative wrt the logits is
// d_logits and wrt the features (from paths other than the classifier) is
// d_features. d_features may be empty.
void backward(const ModelParams& params, const ForwardCache& cache, std::span<const double> d_logits,
              std::span<const double> d_features, ModelParams& grad);

// Accumulates projector c's gradient for d_out = dLoss/dProj_c(z) and adds
// the induced feature gradient into d_features.
void backward_projector(const ModelParams& params, std::size_t c, std::span<const double> z,
                        std::span<const double> d_out, ModelParams& grad, std::span<double> d_features);

// Argmax of the logits; ties go to the lowest class index.
std::size_t argmax(std::span<const double> logits);

}  // namespace a3w
