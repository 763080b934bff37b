#include "a3w/model/params.hpp"

#include <cmath>

#include "a3w/error.hpp"
#include "a3w/simd/kernels.hpp"

namespace a3w {
namespace {

Linear gaussian_linear(std::size_t in, std::size_t out, double init_scale, RngStream& rng) {
  Linear l{Matrix(out, in), std::vector<double>(out, 0.0)};
  const double scale = init_scale / std::sqrt(static_cast<double>(in));
  for (auto& w : l.weight.values()) w = scale * rng.gaussian();
  return l;
}

Linear projector_init(std::size_t in, std::size_t out, RngStream& rng) {
  if (in == out) return Linear{Matrix::identity(in), std::vector<double>(out, 0.0)};
  const std::uint64_t seed = rng.next_u64();
  // Orthonormal rows when they fit in the input space, orthonormal columns otherwise.
  Matrix w = out < in ? transpose(random_orthonormal_columns(in, out, seed, streams::model_init))
                      : random_orthonormal_columns(out, in, seed, streams::model_init);
  return Linear{std::move(w), std::vector<double>(out, 0.0)};
}

void check_linear(const Linear& l, std::size_t in, std::size_t out, const char* name) {
  if (l.in_dim() != in || l.out_dim() != out || l.bias.size() != out) {
    throw ShapeError(std::string("inconsistent shape for ") + name);
  }
  if (!l.weight.all_finite()) throw NumericError(std::string("non-finite weight in ") + name);
  for (double b : l.bias) {
    if (!std::isfinite(b)) throw NumericError(std::string("non-finite bias in ") + name);
  }
}

}  // namespace

ModelDims ModelParams::dims() const {
  return ModelDims{hidden.in_dim(), hidden.out_dim(), feature.out_dim(), classifier.out_dim(),
                   projectors.empty() ? 0 : projectors.front().out_dim()};
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = hidden.parameter_count() + feature.parameter_count() + classifier.parameter_count();
  for (const auto& p : projectors) n += p.parameter_count();
  return n;
}

void ModelParams::validate() const {
  const ModelDims d = dims();
  check_linear(hidden, d.input, d.hidden, "hidden");
  check_linear(feature, d.hidden, d.feature, "feature");
  check_linear(classifier, d.feature, d.classes, "classifier");
  if (projectors.size() != d.classes) throw ShapeError("projector count must equal class count");
  for (const auto& p : projectors) check_linear(p, d.feature, d.anchor_dim, "projector");
}

ModelParams init_model(const ModelDims& dims, double init_scale, RngStream& rng, ProjectorInit projector_init_mode,
                       const AnchorSet* anchors) {
  if (dims.input == 0 || dims.hidden == 0 || dims.feature == 0 || dims.classes == 0 || dims.anchor_dim == 0) {
    throw InputError("model dimensions must all be >= 1");
  }
  if (!std::isfinite(init_scale)) throw InputError("init scale must be finite");
  ModelParams p;
  p.hidden = gaussian_linear(dims.input, dims.hidden, init_scale, rng);
  p.feature = gaussian_linear(dims.hidden, dims.feature, init_scale, rng);
  p.classifier = gaussian_linear(dims.feature, dims.classes, init_scale, rng);
  for (std::size_t c = 0; c < dims.classes; ++c) {
    p.projectors.push_back(projector_init(dims.feature, dims.anchor_dim, rng));
  }
  if (projector_init_mode == ProjectorInit::anchor_seeded) {
    if (!anchors || anchors->num_classes() != dims.classes || anchors->dim() != dims.anchor_dim) {
      throw InputError("anchor-seeded projector init needs anchors matching classes and anchor dimension");
    }
    for (std::size_t c = 0; c < dims.classes; ++c) {
      const auto a = anchors->anchor(c);
      p.projectors[c].bias.assign(a.begin(), a.end());
    }
  }
  return p;
}

ModelParams zeros_like(const ModelParams& params) {
  ModelParams z = params;
  for_each_tensor(z, [](const std::string&, Partition, std::span<double> t) { std::fill(t.begin(), t.end(), 0.0); });
  return z;
}

std::vector<double> flatten(const ModelParams& params) {
  std::vector<double> out;
  out.reserve(params.parameter_count());
  for_each_tensor(params, [&](const std::string&, Partition, std::span<const double> t) {
    out.insert(out.end(), t.begin(), t.end());
  });
  return out;
}

void unflatten(ModelParams& params, std::span<const double> values) {
  if (values.size() != params.parameter_count()) throw ShapeError("flat parameter vector has the wrong length");
  std::size_t offset = 0;
  for_each_tensor(params, [&](const std::string&, Partition, std::span<double> t) {
    std::copy(values.begin() + static_cast<std::ptrdiff_t>(offset),
              values.begin() + static_cast<std::ptrdiff_t>(offset + t.size()), t.begin());
    offset += t.size();
  });
}

void sgd_step(ModelParams& params, const ModelParams& grad, double learning_rate, Partition partition) {
  std::vector<std::span<const double>> grads;
  for_each_tensor(grad, [&](const std::string&, Partition, std::span<const double> t) { grads.push_back(t); });
  std::size_t i = 0;
  for_each_tensor(params, [&](const std::string& name, Partition part, std::span<double> t) {
    const auto g = grads.at(i++);
    if (g.size() != t.size()) throw ShapeError("gradient shape mismatch for " + name);
    if (part == partition) simd::axpy(-learning_rate, g, t);
  });
}

bool partition_equal(const ModelParams& a, const ModelParams& b, Partition partition) {
  std::vector<std::span<const double>> lhs;
  for_each_tensor(a, [&](const std::string&, Partition part, std::span<const double> t) {
    if (part == partition) lhs.push_back(t);
  });
  std::size_t i = 0;
  bool equal = true;
  for_each_tensor(b, [&](const std::string&, Partition part, std::span<const double> t) {
    if (part != partition) return;
    if (i >= lhs.size() || !std::equal(t.begin(), t.end(), lhs[i].begin(), lhs[i].end())) equal = false;
    ++i;
  });
  return equal && i == lhs.size();
}

}  // namespace a3w
