#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "a3w/numkit/matrix.hpp"

namespace a3w {

struct Sample {
  std::vector<double> x;
  std::size_t true_label = 0;
  std::size_t observed_label = 0;
  std::size_t domain = 0;
  bool corrupted = false;

  friend bool operator==(const Sample&, const Sample&) = default;
};

// Synthetic multi-domain generator. A sample of class y in domain d is
//   x = concat(A_d (mu_y + sigma g), s)
// where s is the spurious vector of class y with probability rho_d and the
// spurious vector of a uniformly chosen other class otherwise.
struct GeneratorSpec {
  std::size_t num_classes = 4;
  std::size_t num_domains = 4;
  std::size_t invariant_dim = 8;
  std::size_t spurious_dim = 4;
  std::size_t per_class_per_domain = 150;
  double sigma = 0.5;
  // Per-domain probability that the spurious block matches the label;
  // negative values behave like 0. Must have num_domains entries.
  std::vector<double> rho;
  double prototype_scale = 1.0;
  double spurious_scale = 1.0;
  // Strength of the per-domain linear distortion A_d = I + shift * G / sqrt(k).
  double domain_shift = 0.5;

  void validate() const;
};

struct GeneratorParams {
  Matrix prototypes;                // C x k_inv
  std::vector<Matrix> transforms;   // D matrices, k_inv x k_inv
  Matrix spurious;                  // C x k_sp
};

struct MultiDomainDataset {
  std::size_t num_classes = 0;
  std::size_t num_domains = 0;
  std::size_t feature_dim = 0;
  std::vector<Sample> samples;  // grouped by domain
  std::optional<GeneratorParams> generator;

  std::size_t domain_size(std::size_t d) const;
  // Shape checks plus coverage: every domain holds every class.
  void validate() const;
};

// Source domains get the listed rho values in order; the target gets target_rho.
std::vector<double> rho_for_target(std::size_t num_domains, std::size_t target,
                                   const std::vector<double>& source_rho, double target_rho);

MultiDomainDataset make_domains(const GeneratorSpec& spec, std::uint64_t seed);

}  // namespace a3w
