#pragma once

#include <span>

#include "a3w/anchors/anchor_set.hpp"
#include "a3w/datagen/split.hpp"
#include "a3w/model/ema.hpp"
#include "a3w/trainer/config.hpp"
#include "a3w/trainer/metric_log.hpp"

namespace a3w {

struct TrainState {
  ModelParams params;
  EmaState ema;
  std::size_t step = 0;
  MetricLog log;
};

TrainState init_state(const TrainConfig& cfg, const ModelDims& dims, const AnchorSet* anchors = nullptr);

struct StepResult {
  double loss = 0.0;
  double weight_sum = 1.0;
  bool map_update = false;
};

// One SGD step on the warm-up cross-entropy over featurizer and classifier.
StepResult warmup_step(TrainState& state, std::span<const Sample> batch, const TrainConfig& cfg);

// One step on the weighted objective. On mapping-layer steps only the
// projectors move; otherwise only the featurizer and classifier.
StepResult main_step(TrainState& state, std::span<const Sample> batch, const AnchorSet& anchors,
                     const TrainConfig& cfg);

struct Evaluation {
  double val_acc = 0.0;
  double test_acc = 0.0;
  double clean_src_acc = 0.0;
  double noise_mem_acc = 0.0;
};

// Accuracies of the EMA network. Source accuracy uses the uncorrupted training
// samples; noise memorization counts corrupted samples predicted as their
// corrupted label.
Evaluation evaluate(const EmaState& ema, const DomainSplit& split);

struct TrainingResult {
  TrainState state;
  std::size_t selected = 0;  // row of state.log picked by validation accuracy

  const MetricRow& selected_row() const { return state.log.at(selected); }
};

TrainingResult run_training(const DomainSplit& split, const AnchorSet& anchors, const TrainConfig& cfg);

}  // namespace a3w
