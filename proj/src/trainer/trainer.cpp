#include "a3w/trainer/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "a3w/error.hpp"
#include "a3w/numkit/rng.hpp"

namespace a3w {

namespace {

void maybe_update_ema(TrainState& state, const TrainConfig& cfg) {
  if (state.step % cfg.ema_every == 0) ema_update_in_place(state.ema, state.params);
}

double accuracy(const ModelParams& net, const std::vector<Sample>& samples, bool use_observed) {
  if (samples.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t hits = 0;
  for (const auto& s : samples) hits += predict(net, s.x) == (use_observed ? s.observed_label : s.true_label);
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

}  // namespace

TrainState init_state(const TrainConfig& cfg, const ModelDims& dims, const AnchorSet* anchors) {
  RngStream rng(cfg.seed, streams::model_init);
  TrainState state;
  state.params = init_model(dims, cfg.init_scale, rng, cfg.projector_init, anchors);
  state.ema = EmaState::start(state.params);
  return state;
}

StepResult warmup_step(TrainState& state, std::span<const Sample> batch, const TrainConfig& cfg) {
  if (state.step >= cfg.warmup_steps()) throw StateError("warm-up step requested after warm-up ended");
  WarmupBatch loss;
  try {
    loss = warmup_batch_loss(batch, state.params, cfg.warmup_mean);
  } catch (const NumericError& e) {
    throw TrainingError(e.what(), state.step);
  } catch (const DomainError& e) {
    throw TrainingError(e.what(), state.step);
  }
  if (!std::isfinite(loss.total)) throw TrainingError("warm-up loss is not finite", state.step);
  sgd_step(state.params, loss.grad, cfg.learning_rate, Partition::backbone);
  ++state.step;
  maybe_update_ema(state, cfg);
  return StepResult{loss.total, 1.0, false};
}

StepResult main_step(TrainState& state, std::span<const Sample> batch, const AnchorSet& anchors,
                     const TrainConfig& cfg) {
  if (state.step < cfg.warmup_steps()) throw StateError("main-phase step requested during warm-up");
  BatchLosses losses;
  try {
    losses = total_loss(batch, state.params, anchors, cfg.effective_objective());
  } catch (const NumericError& e) {
    throw TrainingError(e.what(), state.step);
  } catch (const DomainError& e) {
    throw TrainingError(e.what(), state.step);
  }
  if (!std::isfinite(losses.total)) throw TrainingError("training loss is not finite", state.step);
  const bool map_update = map_update_due(state.step, cfg);
  sgd_step(state.params, losses.grad, cfg.learning_rate, map_update ? Partition::projectors : Partition::backbone);
  ++state.step;
  maybe_update_ema(state, cfg);
  return StepResult{losses.total, losses.weight_sum(), map_update};
}

Evaluation evaluate(const EmaState& ema, const DomainSplit& split) {
  Evaluation ev;
  ev.val_acc = accuracy(ema.shadow, split.validation, false);
  ev.test_acc = accuracy(ema.shadow, split.test, false);
  std::vector<Sample> clean;
  std::vector<Sample> corrupted;
  for (const auto& s : split.train) (s.corrupted ? corrupted : clean).push_back(s);
  ev.clean_src_acc = accuracy(ema.shadow, clean, false);
  ev.noise_mem_acc = accuracy(ema.shadow, corrupted, true);
  return ev;
}

TrainingResult run_training(const DomainSplit& split, const AnchorSet& anchors, const TrainConfig& cfg) {
  cfg.validate();
  if (split.train.empty()) throw InputError("training split is empty");
  if (split.validation.empty() || split.test.empty()) throw InputError("target validation and test splits are required");
  if (anchors.num_classes() != split.num_classes) {
    throw InputError("anchor set has " + std::to_string(anchors.num_classes()) + " classes but the data has " +
                     std::to_string(split.num_classes));
  }
  ModelDims dims = cfg.dims;
  dims.input = split.feature_dim;
  dims.classes = split.num_classes;
  dims.anchor_dim = anchors.dim();

  TrainingResult result{init_state(cfg, dims, &anchors), 0};
  TrainState& state = result.state;
  RngStream batch_rng(cfg.seed, streams::batches, 0);
  batch_rng = batch_rng.substream(split.target_domain);

  const std::size_t total = cfg.total_steps();
  const std::size_t warmup = cfg.warmup_steps();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double loss_sum = 0.0;
  std::size_t loss_count = 0;
  double w_min = nan;
  double w_max = nan;

  while (state.step < total) {
    const auto batch = sample_batch(split.train, cfg.batch_size, batch_rng);
    const bool in_warmup = state.step < warmup;
    const StepResult r = in_warmup ? warmup_step(state, batch, cfg) : main_step(state, batch, anchors, cfg);
    loss_sum += r.loss;
    ++loss_count;
    if (!in_warmup) {
      w_min = std::isnan(w_min) ? r.weight_sum : std::min(w_min, r.weight_sum);
      w_max = std::isnan(w_max) ? r.weight_sum : std::max(w_max, r.weight_sum);
    }
    if (state.step % cfg.eval_every == 0 || state.step == total) {
      const Evaluation ev = evaluate(state.ema, split);
      state.log.push_back(MetricRow{state.step, in_warmup ? Phase::warmup : Phase::main,
                                    loss_sum / static_cast<double>(loss_count), ev.val_acc, ev.test_acc,
                                    ev.clean_src_acc, ev.noise_mem_acc, w_min, w_max});
      loss_sum = 0.0;
      loss_count = 0;
      w_min = w_max = nan;
    }
  }
  result.selected = select_best(state.log);
  return result;
}

}  // namespace a3w
