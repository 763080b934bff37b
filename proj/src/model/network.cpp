#include "a3w/model/network.hpp"

#include <algorithm>
#include <string>

#include "a3w/error.hpp"
#include "a3w/simd/kernels.hpp"

namespace a3w {
namespace {

void apply(const Linear& l, std::span<const double> x, std::vector<double>& y) {
  y.resize(l.out_dim());
  simd::active().gemv(l.weight.data(), l.out_dim(), l.in_dim(), x.data(), l.bias.data(), y.data());
}

// grad.weight += d_out x^T; grad.bias += d_out; d_in += W^T d_out (if non-empty).
void accumulate(const Linear& l, std::span<const double> x, std::span<const double> d_out, Linear& grad,
                std::span<double> d_in) {
  const auto& k = simd::active();
  k.ger(1.0, d_out.data(), l.out_dim(), x.data(), l.in_dim(), grad.weight.data());
  k.axpy(1.0, d_out.data(), grad.bias.data(), d_out.size());
  if (!d_in.empty()) k.gemv_t(l.weight.data(), l.out_dim(), l.in_dim(), d_out.data(), d_in.data());
}

}  // namespace

ForwardCache forward(const ModelParams& params, std::span<const double> x) {
  if (x.size() != params.hidden.in_dim()) {
    throw ShapeError("input has dimension " + std::to_string(x.size()) + ", model expects " +
                     std::to_string(params.hidden.in_dim()));
  }
  ForwardCache c;
  c.input.assign(x.begin(), x.end());
  apply(params.hidden, x, c.hidden_pre);
  c.hidden.resize(c.hidden_pre.size());
  std::transform(c.hidden_pre.begin(), c.hidden_pre.end(), c.hidden.begin(), [](double v) { return v > 0.0 ? v : 0.0; });
  apply(params.feature, c.hidden, c.features);
  apply(params.classifier, c.features, c.logits);
  return c;
}

std::vector<double> project(const ModelParams& params, std::size_t c, std::span<const double> z) {
  if (c >= params.projectors.size()) throw InputError("projector index " + std::to_string(c) + " out of range");
  const Linear& l = params.projectors[c];
  if (z.size() != l.in_dim()) throw ShapeError("feature dimension does not match projector input");
  std::vector<double> v;
  apply(l, z, v);
  return v;
}

void backward(const ModelParams& params, const ForwardCache& cache, std::span<const double> d_logits,
              std::span<const double> d_features, ModelParams& grad) {
  std::vector<double> dz(params.feature.out_dim(), 0.0);
  if (!d_features.empty()) std::copy(d_features.begin(), d_features.end(), dz.begin());
  accumulate(params.classifier, cache.features, d_logits, grad.classifier, dz);

  std::vector<double> dh(params.hidden.out_dim(), 0.0);
  accumulate(params.feature, cache.hidden, dz, grad.feature, dh);
  for (std::size_t i = 0; i < dh.size(); ++i) {
    if (!(cache.hidden_pre[i] > 0.0)) dh[i] = 0.0;
  }
  accumulate(params.hidden, cache.input, dh, grad.hidden, {});
}

void backward_projector(const ModelParams& params, std::size_t c, std::span<const double> z,
                        std::span<const double> d_out, ModelParams& grad, std::span<double> d_features) {
  if (c >= params.projectors.size()) throw InputError("projector index " + std::to_string(c) + " out of range");
  accumulate(params.projectors[c], z, d_out, grad.projectors[c], d_features);
}

std::size_t argmax(std::span<const double> logits) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < logits.size(); ++i) {
    if (logits[i] > logits[best]) best = i;
  }
  return best;
}

}  // namespace a3w
