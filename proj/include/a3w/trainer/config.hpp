#pragma once

#include <cstddef>
#include <cstdint>

#include "a3w/model/params.hpp"
#include "a3w/objective/total_loss.hpp"

namespace a3w {

struct TrainConfig {
  std::size_t n_steps = 5000;
  std::size_t batch_size = 32;
  double learning_rate = 1e-4;
  double warmup_fraction = 0.1;
  double map_update_interval_fraction = 0.1;
  std::size_t ema_every = 10;
  std::size_t eval_every = 100;
  ObjectiveConfig objective;
  std::uint64_t seed = 0;

  // "Without NLP anchor": lambda = tau = 0.
  bool disable_anchor = false;
  // "Without weighted loss": w_i = 1/N.
  bool disable_weighting = false;

  // Average the warm-up cross-entropy over the batch instead of summing it.
  bool warmup_mean = false;
  // When false, warm-up runs before n_steps main-phase steps instead of
  // consuming the first part of the budget.
  bool warmup_in_budget = true;

  // input and classes are taken from the data at run time.
  ModelDims dims;
  double init_scale = 1.0;
  ProjectorInit projector_init = ProjectorInit::standard;

  void validate() const;

  std::size_t warmup_steps() const;   // ceil(warmup_fraction * n_steps)
  std::size_t map_interval() const;   // max(1, floor(map_update_interval_fraction * n_steps))
  std::size_t total_steps() const;
  ObjectiveConfig effective_objective() const;
};

// True when `step` (0-based) is a mapping-layer update step.
bool map_update_due(std::size_t step, const TrainConfig& cfg);

}  // namespace a3w
