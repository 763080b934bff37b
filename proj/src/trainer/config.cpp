#include "a3w/trainer/config.hpp"

#include <cmath>

#include "a3w/error.hpp"

namespace a3w {

void TrainConfig::validate() const {
  if (n_steps < 10) throw InputError("n_steps must be >= 10");
  if (batch_size < 1) throw InputError("batch_size must be >= 1");
  if (!std::isfinite(learning_rate) || learning_rate <= 0.0) throw InputError("learning_rate must be > 0");
  if (!(warmup_fraction > 0.0 && warmup_fraction < 1.0)) throw InputError("warmup_fraction must lie in (0, 1)");
  if (!(map_update_interval_fraction > 0.0 && map_update_interval_fraction <= 1.0)) {
    throw InputError("map_update_interval_fraction must lie in (0, 1]");
  }
  if (ema_every < 1) throw InputError("ema_every must be >= 1");
  if (eval_every < 1) throw InputError("eval_every must be >= 1");
  if (dims.hidden < 1 || dims.feature < 1) throw InputError("hidden and feature widths must be >= 1");
  if (!std::isfinite(init_scale) || init_scale <= 0.0) throw InputError("init_scale must be > 0");
  objective.validate();
}

std::size_t TrainConfig::warmup_steps() const {
  return static_cast<std::size_t>(std::ceil(warmup_fraction * static_cast<double>(n_steps)));
}

std::size_t TrainConfig::map_interval() const {
  const auto i = static_cast<std::size_t>(std::floor(map_update_interval_fraction * static_cast<double>(n_steps)));
  return i < 1 ? 1 : i;
}

std::size_t TrainConfig::total_steps() const { return warmup_in_budget ? n_steps : n_steps + warmup_steps(); }

ObjectiveConfig TrainConfig::effective_objective() const {
  ObjectiveConfig obj = objective;
  if (disable_anchor) {
    obj.lambda = 0.0;
    obj.tau = 0.0;
  }
  if (disable_weighting) obj.uniform_weights = true;
  return obj;
}

bool map_update_due(std::size_t step, const TrainConfig& cfg) {
  const std::size_t warmup = cfg.warmup_steps();
  if (step < warmup || step >= cfg.total_steps()) return false;
  return (step - warmup) % cfg.map_interval() == 0;
}

}  // namespace a3w
