#include "a3w/harness/experiments.hpp"

#include "a3w/anchors/anchor_file.hpp"
#include "a3w/anchors/toy_encoder.hpp"
#include "a3w/datagen/feature_file.hpp"
#include "a3w/datagen/noise.hpp"
#include "a3w/error.hpp"
#include "a3w/model/network.hpp"

namespace a3w {

std::string_view arm_name(Arm arm) {
  switch (arm) {
    case Arm::a3w: return "a3w";
    case Arm::erm: return "erm";
    case Arm::no_anchor: return "no_anchor";
    case Arm::no_weight: return "no_weight";
  }
  return "unknown";
}

std::optional<Arm> parse_arm(std::string_view name) {
  for (Arm a : {Arm::a3w, Arm::erm, Arm::no_anchor, Arm::no_weight}) {
    if (arm_name(a) == name) return a;
  }
  return std::nullopt;
}

TrainConfig arm_config(const TrainConfig& base, Arm arm) {
  TrainConfig cfg = base;
  cfg.disable_anchor = base.disable_anchor || arm == Arm::erm || arm == Arm::no_anchor;
  cfg.disable_weighting = base.disable_weighting || arm == Arm::erm || arm == Arm::no_weight;
  return cfg;
}

std::vector<Arm> arms_for(const ExperimentConfig& cfg) {
  std::vector<Arm> arms{Arm::a3w, Arm::erm};
  if (cfg.ablations) {
    arms.push_back(Arm::no_anchor);
    arms.push_back(Arm::no_weight);
  }
  return arms;
}

TrialData prepare_trial(const ExperimentConfig& cfg, std::size_t target, std::uint64_t seed) {
  MultiDomainDataset ds;
  if (cfg.feature_file) {
    ds = read_feature_file(*cfg.feature_file);
  } else {
    GeneratorSpec spec = cfg.generator;
    spec.rho = rho_for_target(spec.num_domains, target, cfg.source_rho, cfg.target_rho);
    ds = make_domains(spec, seed);
  }
  if (target >= ds.num_domains) throw ConfigError("target domain " + std::to_string(target) + " out of range");
  ds = inject_symmetric_noise(ds, NoiseModel{cfg.noise}, seed, target);

  std::vector<std::string> warnings;
  std::optional<AnchorSet> anchors;
  switch (cfg.anchor_source) {
    case AnchorSource::oracle:
      if (!ds.generator) throw ConfigError("oracle anchors need generator prototypes");
      anchors = oracle_anchors(ds.generator->prototypes, cfg.anchor_dim, seed,
                               cfg.class_names.empty() ? default_class_names(ds.num_classes) : cfg.class_names);
      break;
    case AnchorSource::toy: {
      const auto names = cfg.class_names.empty() ? default_class_names(ds.num_classes) : cfg.class_names;
      anchors = toy_anchors(make_toy_encoder(seed, cfg.anchor_dim), names);
      break;
    }
    case AnchorSource::file: {
      auto loaded = read_anchor_file(*cfg.anchor_file);
      warnings = std::move(loaded.warnings);
      anchors = std::move(loaded.anchors);
      break;
    }
  }
  if (anchors->num_classes() != ds.num_classes) {
    throw ConfigError("anchors describe " + std::to_string(anchors->num_classes()) + " classes but the data has " +
                      std::to_string(ds.num_classes));
  }
  const std::size_t corrupted = count_corrupted(ds);
  return TrialData{leave_one_out_split(ds, target, seed), std::move(*anchors), corrupted, std::move(warnings)};
}

RunRecord run_arm(const ExperimentConfig& cfg, const TrialData& data, Arm arm, std::size_t trial,
                  std::uint64_t seed, TrainingResult* full) {
  TrainConfig tc = arm_config(cfg.train, arm);
  tc.seed = seed;
  TrainingResult result = run_training(data.split, data.anchors, tc);
  const MetricRow& best = result.selected_row();
  RunRecord rec{arm, data.split.target_domain, trial, seed, best.test_acc, result.state.log.back().noise_mem_acc,
                best.step, result.state.log};
  if (full) *full = std::move(result);
  return rec;
}

std::vector<EmbeddingRow> collect_embeddings(const TrainingResult& result, const TrialData& data, Arm arm,
                                             std::size_t trial) {
  std::vector<EmbeddingRow> rows;
  const ModelParams& net = result.state.ema.shadow;
  auto add = [&](const std::vector<Sample>& samples, const char* split) {
    for (const auto& s : samples) {
      rows.push_back(EmbeddingRow{arm, data.split.target_domain, trial, split, s.domain, s.true_label,
                                  s.observed_label, forward(net, s.x).features});
    }
  };
  add(data.split.train, "train");
  add(data.split.test, "test");
  return rows;
}

CrossTestResult run_cross_test(const ExperimentConfig& cfg) {
  cfg.validate();
  CrossTestResult out;
  out.arms = arms_for(cfg);
  out.trials = cfg.trials;
  const auto seeds = cfg.trial_seeds();
  // Resolve the domain count (and surface data/anchor errors) before training.
  const TrialData probe = prepare_trial(cfg, cfg.targets.empty() ? 0 : cfg.targets.front(), seeds.front());
  const std::size_t num_domains = cfg.feature_file ? read_feature_file(*cfg.feature_file).num_domains
                                                   : cfg.generator.num_domains;
  out.targets = cfg.target_domains(num_domains);

  for (std::size_t target : out.targets) {
    for (std::size_t trial = 0; trial < seeds.size(); ++trial) {
      const TrialData data = prepare_trial(cfg, target, seeds[trial]);
      for (Arm arm : out.arms) {
        const bool keep = trial == 0 && (arm == Arm::a3w || arm == Arm::erm);
        TrainingResult full;
        out.runs.push_back(run_arm(cfg, data, arm, trial, seeds[trial], keep ? &full : nullptr));
        if (keep) {
          auto rows = collect_embeddings(full, data, arm, trial);
          out.embeddings.insert(out.embeddings.end(), std::make_move_iterator(rows.begin()),
                                std::make_move_iterator(rows.end()));
        }
      }
    }
  }
  return out;
}

std::string_view sweep_param_name(SweepParam p) {
  switch (p) {
    case SweepParam::lambda: return "lambda";
    case SweepParam::tau: return "tau";
    case SweepParam::learning_rate: return "lr";
    case SweepParam::interval: return "interval";
  }
  return "unknown";
}

std::optional<SweepParam> parse_sweep_param(std::string_view name) {
  for (SweepParam p : {SweepParam::lambda, SweepParam::tau, SweepParam::learning_rate, SweepParam::interval}) {
    if (sweep_param_name(p) == name) return p;
  }
  return std::nullopt;
}

std::vector<SweepRow> sensitivity_sweep(const ExperimentConfig& cfg, SweepParam param,
                                        const std::vector<double>& grid) {
  if (grid.empty()) throw ConfigError("sweep grid is empty");
  cfg.validate();
  const std::uint64_t seed = cfg.trial_seeds().front();
  const std::size_t target = cfg.targets.empty() ? 0 : cfg.targets.front();
  const TrialData data = prepare_trial(cfg, target, seed);
  std::vector<SweepRow> rows;
  for (double value : grid) {
    ExperimentConfig run = cfg;
    switch (param) {
      case SweepParam::lambda: run.train.objective.lambda = value; break;
      case SweepParam::tau: run.train.objective.tau = value; break;
      case SweepParam::learning_rate: run.train.learning_rate = value; break;
      case SweepParam::interval: run.train.map_update_interval_fraction = value; break;
    }
    try {
      run.train.validate();
    } catch (const InputError& e) {
      throw ConfigError(std::string(sweep_param_name(param)) + " grid value rejected: " + e.what());
    }
    const RunRecord rec = run_arm(run, data, Arm::a3w, 0, seed);
    rows.push_back(SweepRow{param, value, rec.test_acc, rec.noise_mem_acc});
  }
  return rows;
}

std::vector<SweepRow> sensitivity_sweep(const ExperimentConfig& cfg, const std::vector<SweepParam>& params) {
  std::vector<SweepRow> rows;
  for (SweepParam p : params) {
    const auto& grid = p == SweepParam::lambda          ? cfg.lambda_grid
                       : p == SweepParam::tau           ? cfg.tau_grid
                       : p == SweepParam::learning_rate ? cfg.lr_grid
                                                        : cfg.interval_grid;
    auto part = sensitivity_sweep(cfg, p, grid);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

}  // namespace a3w
