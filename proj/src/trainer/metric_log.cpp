#include "a3w/trainer/metric_log.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "a3w/error.hpp"
#include "a3w/numkit/text.hpp"

namespace a3w {

std::string_view phase_name(Phase phase) { return phase == Phase::warmup ? "warmup" : "main"; }

void write_metric_csv(std::ostream& out, const MetricLog& log) {
  out << kMetricHeader << '\n';
  for (const auto& r : log) {
    out << r.step << ',' << phase_name(r.phase) << ',' << format_fixed(r.train_loss) << ','
        << format_fixed(r.val_acc) << ',' << format_fixed(r.test_acc) << ',' << format_fixed(r.clean_src_acc) << ','
        << format_fixed(r.noise_mem_acc) << ',' << format_fixed(r.sum_w_min) << ',' << format_fixed(r.sum_w_max)
        << '\n';
  }
}

std::string metric_csv(const MetricLog& log) {
  std::ostringstream out;
  write_metric_csv(out, log);
  return out.str();
}

MetricLog parse_metric_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || trim(line) != kMetricHeader) throw ParseError("missing metric log header", 1);
  MetricLog log;
  auto number = [&](std::string_view tok) {
    if (tok == "nan") return std::numeric_limits<double>::quiet_NaN();
    const auto v = parse_double(tok);
    if (!v) throw ParseError("bad number '" + std::string(tok) + "'", line_no);
    return *v;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto tok = split_tokens(line, ",");
    if (tok.size() != 9) throw ParseError("expected 9 columns", line_no);
    MetricRow r;
    const auto step = parse_int(tok[0]);
    if (!step || *step < 0) throw ParseError("bad step", line_no);
    r.step = static_cast<std::size_t>(*step);
    if (tok[1] == "warmup") {
      r.phase = Phase::warmup;
    } else if (tok[1] == "main") {
      r.phase = Phase::main;
    } else {
      throw ParseError("unknown phase '" + std::string(tok[1]) + "'", line_no);
    }
    r.train_loss = number(tok[2]);
    r.val_acc = number(tok[3]);
    r.test_acc = number(tok[4]);
    r.clean_src_acc = number(tok[5]);
    r.noise_mem_acc = number(tok[6]);
    r.sum_w_min = number(tok[7]);
    r.sum_w_max = number(tok[8]);
    log.push_back(r);
  }
  return log;
}

std::size_t select_best(const MetricLog& log) {
  if (log.empty()) throw StateError("cannot select from an empty metric log");
  std::size_t best = 0;
  for (std::size_t i = 1; i < log.size(); ++i) {
    if (log[i].val_acc > log[best].val_acc) best = i;
  }
  return best;
}

}  // namespace a3w
