#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "a3w/harness/checks.hpp"
#include "a3w/harness/experiments.hpp"

namespace a3w {

// Undefined aggregates (no corrupted samples anywhere) are NaN and print as
// "n/a"; the standard deviation is absent for a single trial.
struct ResultRow {
  std::string arm;
  std::size_t target = 0;
  std::size_t trials = 0;
  double mean_test_acc = 0.0;
  std::optional<double> std_test_acc;
  double mean_noise_mem_acc = 0.0;
};

// Cross-domain averages per arm.
struct AblationRow {
  std::string arm;
  double mean_test_acc = 0.0;
  double mean_noise_mem_acc = 0.0;
  double delta_vs_a3w = 0.0;
};

struct CurveRow {
  std::string arm;
  std::size_t target = 0;
  std::size_t trial = 0;
  MetricRow metrics;
};

struct Report {
  std::vector<ResultRow> results;
  std::vector<AblationRow> ablation;
  std::vector<CheckRow> checks;
  std::vector<CurveRow> curves;
  std::vector<EmbeddingRow> embeddings;

  const AblationRow* arm_summary(std::string_view arm) const;
};

Report build_report(const CrossTestResult& result);

std::string results_csv(const Report& report);
std::string ablation_csv(const Report& report);
std::string checks_csv(const Report& report);
std::string curves_csv(const Report& report);
std::string embeddings_csv(const Report& report);

// Writes results.csv, ablation.csv, checks.csv, curves.csv and embeddings.csv.
void emit_report(const Report& report, const std::filesystem::path& out_dir);

// Re-reads results.csv, ablation.csv and checks.csv.
Report read_report(const std::filesystem::path& in_dir);

// Plain-text table for terminals.
std::string format_summary(const Report& report);

}  // namespace a3w
