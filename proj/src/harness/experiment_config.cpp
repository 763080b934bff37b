#include "a3w/harness/experiment_config.hpp"

#include <algorithm>
#include <cmath>

#include "a3w/error.hpp"

namespace a3w {

namespace {

template <typename T>
void assign(std::optional<T> v, T& dst) {
  if (v) dst = std::move(*v);
}

}  // namespace

const std::vector<std::string>& experiment_config_keys() {
  static const std::vector<std::string> keys{
      "num_classes", "num_domains", "invariant_dim", "spurious_dim", "per_class_per_domain", "sigma",
      "prototype_scale", "spurious_scale", "domain_shift", "source_rho", "target_rho", "feature_file",
      "anchor_source", "anchor_file", "anchor_dim", "class_names", "noise", "trials", "seeds", "targets",
      "ablations", "n_steps", "batch_size", "learning_rate", "warmup_fraction", "map_update_interval_fraction",
      "ema_every", "eval_every", "lambda", "tau", "alignment", "stop_gradient_weights", "disable_anchor",
      "disable_weighting", "warmup_mean", "warmup_in_budget", "hidden_dim", "feature_dim", "init_scale",
      "projector_init", "lambda_grid", "tau_grid", "lr_grid", "interval_grid"};
  return keys;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (!seeds.empty() && seeds.size() != trials) {
    throw ConfigError("seeds lists " + std::to_string(seeds.size()) + " values for " + std::to_string(trials) +
                      " trials");
  }
  if (!(noise >= 0.0 && noise <= 1.0)) throw ConfigError("noise must lie in [0, 1]");
  if (source_rho.empty()) throw ConfigError("source_rho is empty");
  for (double r : source_rho) {
    if (!(r >= -1.0 && r <= 1.0)) throw ConfigError("source_rho values must lie in [-1, 1]");
  }
  if (!(target_rho >= -1.0 && target_rho <= 1.0)) throw ConfigError("target_rho must lie in [-1, 1]");
  if (anchor_source == AnchorSource::file && !anchor_file) throw ConfigError("anchor_source = file needs anchor_file");
  if (anchor_source == AnchorSource::oracle && feature_file) {
    throw ConfigError("oracle anchors need the synthetic generator; use toy or file anchors with feature_file");
  }
  if (anchor_dim < 1) throw ConfigError("anchor_dim must be >= 1");
  if (!feature_file) {
    if (!class_names.empty() && class_names.size() != generator.num_classes) {
      throw ConfigError("class_names has " + std::to_string(class_names.size()) + " entries for " +
                        std::to_string(generator.num_classes) + " classes");
    }
    if (generator.num_domains < 2) throw ConfigError("num_domains must be >= 2");
    for (std::size_t t : targets) {
      if (t >= generator.num_domains) throw ConfigError("target domain " + std::to_string(t) + " out of range");
    }
    GeneratorSpec probe = generator;
    probe.rho = std::vector<double>(generator.num_domains, 0.0);
    try {
      probe.validate();
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
  }
  for (const auto* grid : {&lambda_grid, &tau_grid, &lr_grid, &interval_grid}) {
    if (grid->empty()) throw ConfigError("sweep grids must not be empty");
  }
  try {
    train.validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
}

std::vector<std::uint64_t> ExperimentConfig::trial_seeds() const {
  if (!seeds.empty()) return seeds;
  std::vector<std::uint64_t> out(trials);
  for (std::size_t i = 0; i < trials; ++i) out[i] = i;
  return out;
}

std::vector<std::size_t> ExperimentConfig::target_domains(std::size_t num_domains) const {
  if (!targets.empty()) {
    for (std::size_t t : targets) {
      if (t >= num_domains) throw ConfigError("target domain " + std::to_string(t) + " out of range");
    }
    return targets;
  }
  std::vector<std::size_t> out(num_domains);
  for (std::size_t d = 0; d < num_domains; ++d) out[d] = d;
  return out;
}

ExperimentConfig parse_experiment_config(ConfigFile& f) {
  ExperimentConfig cfg;
  GeneratorSpec& g = cfg.generator;
  assign(f.take_size("num_classes"), g.num_classes);
  assign(f.take_size("num_domains"), g.num_domains);
  assign(f.take_size("invariant_dim"), g.invariant_dim);
  assign(f.take_size("spurious_dim"), g.spurious_dim);
  assign(f.take_size("per_class_per_domain"), g.per_class_per_domain);
  assign(f.take_double("sigma"), g.sigma);
  assign(f.take_double("prototype_scale"), g.prototype_scale);
  assign(f.take_double("spurious_scale"), g.spurious_scale);
  assign(f.take_double("domain_shift"), g.domain_shift);
  assign(f.take_double_list("source_rho"), cfg.source_rho);
  assign(f.take_double("target_rho"), cfg.target_rho);
  if (auto p = f.take_string("feature_file")) cfg.feature_file = *p;

  if (auto src = f.take_string("anchor_source")) {
    if (*src == "oracle") {
      cfg.anchor_source = AnchorSource::oracle;
    } else if (*src == "toy") {
      cfg.anchor_source = AnchorSource::toy;
    } else if (*src == "file") {
      cfg.anchor_source = AnchorSource::file;
    } else {
      throw ConfigError("anchor_source must be oracle, toy or file, got '" + *src + "'");
    }
  }
  if (auto p = f.take_string("anchor_file")) cfg.anchor_file = *p;
  assign(f.take_size("anchor_dim"), cfg.anchor_dim);
  assign(f.take_string_list("class_names"), cfg.class_names);

  assign(f.take_double("noise"), cfg.noise);
  assign(f.take_size("trials"), cfg.trials);
  if (auto seeds = f.take_size_list("seeds")) {
    cfg.seeds.assign(seeds->begin(), seeds->end());
    if (!f.has("trials")) cfg.trials = cfg.seeds.size();
  }
  assign(f.take_size_list("targets"), cfg.targets);
  assign(f.take_bool("ablations"), cfg.ablations);

  TrainConfig& t = cfg.train;
  assign(f.take_size("n_steps"), t.n_steps);
  assign(f.take_size("batch_size"), t.batch_size);
  assign(f.take_double("learning_rate"), t.learning_rate);
  assign(f.take_double("warmup_fraction"), t.warmup_fraction);
  assign(f.take_double("map_update_interval_fraction"), t.map_update_interval_fraction);
  assign(f.take_size("ema_every"), t.ema_every);
  assign(f.take_size("eval_every"), t.eval_every);
  assign(f.take_double("lambda"), t.objective.lambda);
  assign(f.take_double("tau"), t.objective.tau);
  if (auto kind = f.take_string("alignment")) {
    if (*kind == "cosine") {
      t.objective.alignment = AlignmentKind::cosine;
    } else if (*kind == "squared_distance") {
      t.objective.alignment = AlignmentKind::squared_distance;
    } else {
      throw ConfigError("alignment must be cosine or squared_distance, got '" + *kind + "'");
    }
  }
  assign(f.take_bool("stop_gradient_weights"), t.objective.stop_gradient_weights);
  assign(f.take_bool("disable_anchor"), t.disable_anchor);
  assign(f.take_bool("disable_weighting"), t.disable_weighting);
  assign(f.take_bool("warmup_mean"), t.warmup_mean);
  assign(f.take_bool("warmup_in_budget"), t.warmup_in_budget);
  assign(f.take_size("hidden_dim"), t.dims.hidden);
  assign(f.take_size("feature_dim"), t.dims.feature);
  assign(f.take_double("init_scale"), t.init_scale);
  if (auto init = f.take_string("projector_init")) {
    if (*init == "standard") {
      t.projector_init = ProjectorInit::standard;
    } else if (*init == "anchor_seeded") {
      t.projector_init = ProjectorInit::anchor_seeded;
    } else {
      throw ConfigError("projector_init must be standard or anchor_seeded, got '" + *init + "'");
    }
  }

  assign(f.take_double_list("lambda_grid"), cfg.lambda_grid);
  assign(f.take_double_list("tau_grid"), cfg.tau_grid);
  assign(f.take_double_list("lr_grid"), cfg.lr_grid);
  assign(f.take_double_list("interval_grid"), cfg.interval_grid);

  f.reject_unknown();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  ConfigFile f = ConfigFile::load(path);
  return parse_experiment_config(f);
}

}  // namespace a3w
