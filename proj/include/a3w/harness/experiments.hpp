#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "a3w/anchors/anchor_set.hpp"
#include "a3w/datagen/split.hpp"
#include "a3w/harness/experiment_config.hpp"
#include "a3w/trainer/trainer.hpp"

namespace a3w {

enum class Arm { a3w, erm, no_anchor, no_weight };

std::string_view arm_name(Arm arm);
std::optional<Arm> parse_arm(std::string_view name);
// The configured training recipe with the arm's ablation flags applied.
TrainConfig arm_config(const TrainConfig& base, Arm arm);
std::vector<Arm> arms_for(const ExperimentConfig& cfg);

struct TrialData {
  DomainSplit split;
  AnchorSet anchors;
  std::size_t corrupted = 0;
  std::vector<std::string> warnings;
};

// Data, noise, split and anchors for one (target, seed) pair.
TrialData prepare_trial(const ExperimentConfig& cfg, std::size_t target, std::uint64_t seed);

struct RunRecord {
  Arm arm = Arm::a3w;
  std::size_t target = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double test_acc = 0.0;        // at the checkpoint picked by validation accuracy
  double noise_mem_acc = 0.0;   // at the final step
  std::size_t selected_step = 0;
  MetricLog log;
};

struct EmbeddingRow {
  Arm arm = Arm::a3w;
  std::size_t target = 0;
  std::size_t trial = 0;
  std::string split;  // "train" or "test"
  std::size_t domain = 0;
  std::size_t true_label = 0;
  std::size_t observed_label = 0;
  std::vector<double> features;
};

struct CrossTestResult {
  std::vector<Arm> arms;
  std::vector<std::size_t> targets;
  std::size_t trials = 0;
  std::vector<RunRecord> runs;  // ordered by (target, trial, arm)
  std::vector<EmbeddingRow> embeddings;
};

RunRecord run_arm(const ExperimentConfig& cfg, const TrialData& data, Arm arm, std::size_t trial,
                  std::uint64_t seed, TrainingResult* full = nullptr);

// Final-layer features of the EMA network for the training and test samples.
std::vector<EmbeddingRow> collect_embeddings(const TrainingResult& result, const TrialData& data, Arm arm,
                                             std::size_t trial);

// Every target domain in turn, every trial, every arm. Embeddings are kept for
// trial 0 of the full method and ERM.
CrossTestResult run_cross_test(const ExperimentConfig& cfg);

enum class SweepParam { lambda, tau, learning_rate, interval };
std::string_view sweep_param_name(SweepParam p);
std::optional<SweepParam> parse_sweep_param(std::string_view name);

struct SweepRow {
  SweepParam param = SweepParam::lambda;
  double value = 0.0;
  double test_acc = 0.0;
  double noise_mem_acc = 0.0;
};

// One full-method run per grid value, varying one parameter at a time on the
// first target domain and the first seed.
std::vector<SweepRow> sensitivity_sweep(const ExperimentConfig& cfg, const std::vector<SweepParam>& params);
std::vector<SweepRow> sensitivity_sweep(const ExperimentConfig& cfg, SweepParam param,
                                        const std::vector<double>& grid);

}  // namespace a3w
