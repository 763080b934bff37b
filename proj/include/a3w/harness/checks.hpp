#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace a3w {

// One line of checks.csv.
struct CheckRow {
  std::string check;
  std::string case_label;
  double value = 0.0;
  double bound = 0.0;
  bool pass = true;
};

struct CheckOutcome {
  std::vector<CheckRow> rows;
  std::vector<std::string> violations;
  std::vector<std::string> notices;

  bool passed() const { return violations.empty(); }
  // Throws CheckFailure carrying the first violation.
  void require() const;
};

// Corrupted-sample softmax mass against alpha / (alpha + (1 - alpha) e^{tau delta}).
struct Theorem1Grid {
  std::vector<double> alphas{0.1, 0.25, 0.5};
  std::vector<double> deltas{0.05, 0.2, 0.5};
  std::vector<double> taus{0.0, 1.0, 5.0, 10.0, 20.0};
  std::size_t batch = 200;
};
double theorem1_bound(double alpha, double delta, double tau);
CheckOutcome check_theorem1(const Theorem1Grid& grid = {});

// Gradient of -cos(v, a): norm bound 1/|v| and agreement with finite differences.
struct Lemma1Stats {
  std::size_t pairs = 0;
  double max_grad_times_norm = 0.0;
  double max_fd_error = 0.0;
};
CheckOutcome check_lemma1(std::size_t samples_per_dim, const std::vector<std::size_t>& dims, std::uint64_t seed,
                          Lemma1Stats* stats = nullptr);

// Label marginal of the weighted empirical distribution against the clean one.
struct DistributionSpec {
  std::size_t batch = 400;
  std::size_t classes = 4;
  double alpha = 0.25;
  double delta = 0.3;
  std::vector<double> taus{0.0, 1.0, 2.0, 5.0, 10.0, 20.0};
  std::uint64_t seed = 0;
};
struct DistributionRow {
  double tau = 0.0;
  double tv = 0.0;
};
CheckOutcome check_weighted_distribution(const DistributionSpec& spec = {},
                                         std::vector<DistributionRow>* table = nullptr);

// Analytic gradients of the warm-up and weighted losses against central
// differences on small random networks.
struct GradientStats {
  std::size_t instances = 0;
  std::size_t max_parameters = 0;
  double max_warmup_error = 0.0;
  double max_total_error = 0.0;
};
CheckOutcome check_gradients(std::size_t instances = 20, std::uint64_t seed = 0, GradientStats* stats = nullptr);

}  // namespace a3w
