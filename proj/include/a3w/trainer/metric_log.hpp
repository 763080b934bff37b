#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace a3w {

enum class Phase { warmup, main };
std::string_view phase_name(Phase phase);

// One evaluation event. Undefined quantities (no corrupted samples, no
// main-phase batch since the previous event) are NaN.
struct MetricRow {
  std::size_t step = 0;  // steps completed
  Phase phase = Phase::warmup;
  double train_loss = 0.0;
  double val_acc = 0.0;
  double test_acc = 0.0;
  double clean_src_acc = 0.0;
  double noise_mem_acc = 0.0;
  double sum_w_min = 0.0;
  double sum_w_max = 0.0;
};

using MetricLog = std::vector<MetricRow>;

inline constexpr std::string_view kMetricHeader =
    "step,phase,train_loss,val_acc,test_acc,clean_src_acc,noise_mem_acc,sum_w_min,sum_w_max";

void write_metric_csv(std::ostream& out, const MetricLog& log);
std::string metric_csv(const MetricLog& log);
MetricLog parse_metric_csv(std::istream& in);

// Index of the row with the highest validation accuracy; the earliest wins ties.
std::size_t select_best(const MetricLog& log);

}  // namespace a3w
