#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "a3w/anchors/anchor_set.hpp"
#include "a3w/numkit/matrix.hpp"
#include "a3w/numkit/rng.hpp"

namespace a3w {

// Affine map y = W x + b with W stored out x in.
struct Linear {
  Matrix weight;
  std::vector<double> bias;

  std::size_t in_dim() const { return weight.cols(); }
  std::size_t out_dim() const { return weight.rows(); }
  std::size_t parameter_count() const { return weight.size() + bias.size(); }

  friend bool operator==(const Linear&, const Linear&) = default;
};

struct ModelDims {
  std::size_t input = 12;
  std::size_t hidden = 64;
  std::size_t feature = 32;
  std::size_t classes = 4;
  std::size_t anchor_dim = 32;

  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

// Featurizer f = feature(relu(hidden(x))), classifier g, one projector per class.
struct ModelParams {
  Linear hidden;
  Linear feature;
  Linear classifier;
  std::vector<Linear> projectors;

  ModelDims dims() const;
  std::size_t parameter_count() const;
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// The featurizer and classifier move together; projectors are updated on
// their own schedule.
enum class Partition { backbone, projectors };

enum class ProjectorInit {
  // Identity when feature == anchor_dim, otherwise a random map with
  // orthonormal rows (or columns); zero bias.
  standard,
  // As standard, but each projector's bias is its class anchor.
  anchor_seeded,
};

ModelParams init_model(const ModelDims& dims, double init_scale, RngStream& rng,
                       ProjectorInit projector_init = ProjectorInit::standard, const AnchorSet* anchors = nullptr);

ModelParams zeros_like(const ModelParams& params);

// Visits tensors in a fixed order: hidden.{weight,bias}, feature.*, classifier.*,
// projector.<c>.*. The callback receives (name, partition, values).
template <typename Params, typename Fn>
void for_each_tensor(Params& params, Fn&& fn) {
  auto visit_linear = [&](auto& layer, const std::string& name, Partition part) {
    fn(name + ".weight", part, layer.weight.values());
    fn(name + ".bias", part, std::span(layer.bias));
  };
  visit_linear(params.hidden, "hidden", Partition::backbone);
  visit_linear(params.feature, "feature", Partition::backbone);
  visit_linear(params.classifier, "classifier", Partition::backbone);
  for (std::size_t c = 0; c < params.projectors.size(); ++c) {
    visit_linear(params.projectors[c], "projector." + std::to_string(c), Partition::projectors);
  }
}

std::vector<double> flatten(const ModelParams& params);
void unflatten(ModelParams& params, std::span<const double> values);

// params -= lr * grad on one partition only; the other is left bitwise intact.
void sgd_step(ModelParams& params, const ModelParams& grad, double learning_rate, Partition partition);

bool partition_equal(const ModelParams& a, const ModelParams& b, Partition partition);

}  // namespace a3w
