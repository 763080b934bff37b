#include "a3w/objective/total_loss.hpp"

#include <cmath>
#include <string>

#include "a3w/error.hpp"
#include "a3w/model/network.hpp"
#include "a3w/objective/losses.hpp"

namespace a3w {

void ObjectiveConfig::validate() const {
  if (!std::isfinite(lambda) || lambda < 0.0) throw InputError("lambda must be finite and >= 0");
  if (!std::isfinite(tau) || tau < 0.0) throw InputError("tau must be finite and >= 0");
}

double BatchLosses::weight_sum() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

BatchLosses total_loss(std::span<const Sample> batch, const ModelParams& params, const AnchorSet& anchors,
                       const ObjectiveConfig& cfg) {
  cfg.validate();
  if (batch.empty()) throw InputError("empty batch");
  const ModelDims dims = params.dims();
  if (anchors.num_classes() < dims.classes || anchors.dim() != dims.anchor_dim) {
    throw InputError("anchors do not match the model's classes or anchor dimension");
  }
  const std::size_t n = batch.size();

  BatchLosses out;
  out.alignment.resize(n);
  out.cross_entropy.resize(n);
  out.predictions.resize(n);
  std::vector<ForwardCache> caches;
  std::vector<std::vector<double>> align_grads(n);
  std::vector<std::vector<double>> ce_grads(n);
  caches.reserve(n);

  for (std::size_t i = 0; i < n; ++i) {
    const Sample& s = batch[i];
    caches.push_back(forward(params, s.x));
    const auto& cache = caches.back();
    const auto v = project(params, s.observed_label, cache.features);
    LossAndGrad align;
    try {
      align = cfg.alignment == AlignmentKind::cosine ? anchor_loss(v, anchors.anchor(s.observed_label))
                                                     : squared_distance_loss(v, anchors.anchor(s.observed_label));
    } catch (const NumericError& e) {
      throw NumericError(std::string("alignment loss failed for batch sample: ") + e.what(), i);
    }
    out.alignment[i] = align.value;
    align_grads[i] = std::move(align.grad);
    auto ce = cross_entropy(cache.logits, s.observed_label);
    out.cross_entropy[i] = ce.value;
    ce_grads[i] = std::move(ce.grad);
    out.predictions[i] = argmax(cache.logits);
  }

  out.weights = cfg.uniform_weights ? std::vector<double>(n, 1.0 / static_cast<double>(n))
                                    : compute_weights(out.alignment, cfg.tau);

  std::vector<double> per_sample(n);
  for (std::size_t i = 0; i < n; ++i) {
    per_sample[i] = cfg.lambda * out.alignment[i] + out.cross_entropy[i];
    out.total += out.weights[i] * per_sample[i];
  }
  if (!std::isfinite(out.total)) throw NumericError("total loss is not finite");

  // dTotal/dL_i: lambda w_i, plus -tau w_i (c_i - sum_j w_j c_j) when the
  // weights are differentiated as well.
  const bool through_weights = !cfg.stop_gradient_weights && !cfg.uniform_weights;
  out.grad = zeros_like(params);
  std::vector<double> d_features(dims.feature);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = out.weights[i];
    double d_align = cfg.lambda * w;
    if (through_weights) d_align -= cfg.tau * w * (per_sample[i] - out.total);

    std::fill(d_features.begin(), d_features.end(), 0.0);
    auto& dv = align_grads[i];
    for (auto& g : dv) g *= d_align;
    backward_projector(params, batch[i].observed_label, caches[i].features, dv, out.grad, d_features);

    auto& d_logits = ce_grads[i];
    for (auto& g : d_logits) g *= w;
    backward(params, caches[i], d_logits, d_features, out.grad);
  }
  return out;
}

WarmupBatch warmup_batch_loss(std::span<const Sample> batch, const ModelParams& params, bool mean_reduce) {
  if (batch.empty()) throw InputError("empty batch");
  const ModelDims dims = params.dims();
  std::vector<ForwardCache> caches;
  caches.reserve(batch.size());
  Matrix logits(batch.size(), dims.classes);
  std::vector<std::size_t> labels(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    caches.push_back(forward(params, batch[i].x));
    std::copy(caches.back().logits.begin(), caches.back().logits.end(), logits.row(i).begin());
    labels[i] = batch[i].observed_label;
  }
  const auto loss = warmup_loss(logits, labels, mean_reduce);
  WarmupBatch out{loss.value, loss.per_sample, zeros_like(params)};
  for (std::size_t i = 0; i < batch.size(); ++i) backward(params, caches[i], loss.d_logits.row(i), {}, out.grad);
  return out;
}

}  // namespace a3w
