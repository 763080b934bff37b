#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "a3w/datagen/dataset.hpp"
#include "a3w/harness/config_file.hpp"
#include "a3w/trainer/config.hpp"

namespace a3w {

enum class AnchorSource { oracle, toy, file };

struct ExperimentConfig {
  // Synthetic data; the per-domain rho is assembled for each target from
  // source_rho and target_rho.
  GeneratorSpec generator;
  std::vector<double> source_rho{0.8, 0.9, 0.95};
  double target_rho = 0.0;
  // When set, samples come from this feature file instead of the generator.
  std::optional<std::filesystem::path> feature_file;

  AnchorSource anchor_source = AnchorSource::oracle;
  std::optional<std::filesystem::path> anchor_file;
  std::size_t anchor_dim = 32;
  std::vector<std::string> class_names;  // toy encoder prompts; defaults to class_<i>

  double noise = 0.25;
  std::size_t trials = 3;
  std::vector<std::uint64_t> seeds;    // one per trial; defaults to 0..trials-1
  std::vector<std::size_t> targets;    // defaults to every domain
  bool ablations = false;              // add the two single-component ablation arms

  TrainConfig train;

  std::vector<double> lambda_grid{0.05, 0.1, 0.2};
  std::vector<double> tau_grid{5.0, 10.0, 15.0};
  std::vector<double> lr_grid{1e-5, 1e-4, 1e-3};
  std::vector<double> interval_grid{0.05, 0.1, 0.2};

  void validate() const;
  std::vector<std::uint64_t> trial_seeds() const;
  std::vector<std::size_t> target_domains(std::size_t num_domains) const;
};

// Consumes every recognised key and rejects the rest.
ExperimentConfig parse_experiment_config(ConfigFile& file);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// Keys accepted by parse_experiment_config, for help output.
const std::vector<std::string>& experiment_config_keys();

}  // namespace a3w
