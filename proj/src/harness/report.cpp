#include "a3w/harness/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "a3w/error.hpp"
#include "a3w/numkit/text.hpp"

namespace a3w {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::string_view kResultsHeader =
    "arm,target_domain,trials,mean_test_acc,std_test_acc,mean_noise_mem_acc";
constexpr std::string_view kAblationHeader = "arm,mean_test_acc,mean_noise_mem_acc,delta_vs_a3w";
constexpr std::string_view kChecksHeader = "check,case,value,bound,status";
constexpr std::string_view kCurvesHeader =
    "arm,target_domain,trial,step,phase,train_loss,val_acc,test_acc,clean_src_acc,noise_mem_acc,sum_w_min,"
    "sum_w_max";
constexpr std::string_view kEmbeddingsPrefix = "arm,target_domain,trial,split,domain,true_label,observed_label";

std::string fixed_or_na(double v) { return std::isnan(v) ? "n/a" : format_fixed(v); }

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

// Comma split that keeps empty fields.
std::vector<std::string> csv_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::vector<std::string>> read_table(const std::filesystem::path& path, std::string_view header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || trim(line) != header) throw ParseError(path.string() + ": unexpected header", 1);
  const std::size_t columns = csv_fields(header).size();
  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = csv_fields(line);
    if (fields.size() != columns) {
      throw ParseError(path.string() + ": expected " + std::to_string(columns) + " fields", line_no);
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

double number_or_na(const std::string& s, std::size_t line) {
  if (s == "n/a") return kNaN;
  const auto v = parse_double(s);
  if (!v) throw ParseError("bad number '" + s + "'", line);
  return *v;
}

std::size_t index_field(const std::string& s, std::size_t line) {
  const auto v = parse_int(s);
  if (!v || *v < 0) throw ParseError("bad integer '" + s + "'", line);
  return static_cast<std::size_t>(*v);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

const AblationRow* Report::arm_summary(std::string_view arm) const {
  for (const auto& row : ablation) {
    if (row.arm == arm) return &row;
  }
  return nullptr;
}

Report build_report(const CrossTestResult& result) {
  Report report;
  for (Arm arm : result.arms) {
    std::vector<double> per_target_acc;
    std::vector<double> per_target_mem;
    for (std::size_t target : result.targets) {
      std::vector<double> accs;
      std::vector<double> mems;
      for (const auto& run : result.runs) {
        if (run.arm == arm && run.target == target) {
          accs.push_back(run.test_acc);
          mems.push_back(run.noise_mem_acc);
        }
      }
      if (accs.empty()) continue;
      ResultRow row{std::string(arm_name(arm)), target, accs.size(), mean_of(accs), std::nullopt, mean_of(mems)};
      if (accs.size() >= 2) {
        double var = 0.0;
        for (double a : accs) var += (a - row.mean_test_acc) * (a - row.mean_test_acc);
        row.std_test_acc = std::sqrt(var / static_cast<double>(accs.size()));
      }
      per_target_acc.push_back(row.mean_test_acc);
      per_target_mem.push_back(row.mean_noise_mem_acc);
      report.results.push_back(std::move(row));
    }
    if (!per_target_acc.empty()) {
      report.ablation.push_back(
          AblationRow{std::string(arm_name(arm)), mean_of(per_target_acc), mean_of(per_target_mem), kNaN});
    }
  }
  if (const AblationRow* full = report.arm_summary("a3w")) {
    const double base = full->mean_test_acc;
    for (auto& row : report.ablation) row.delta_vs_a3w = row.mean_test_acc - base;
  }
  for (const auto& run : result.runs) {
    for (const auto& m : run.log) {
      report.curves.push_back(CurveRow{std::string(arm_name(run.arm)), run.target, run.trial, m});
    }
  }
  report.embeddings = result.embeddings;
  return report;
}

std::string results_csv(const Report& report) {
  std::ostringstream out;
  out << kResultsHeader << '\n';
  for (const auto& r : report.results) {
    out << r.arm << ',' << r.target << ',' << r.trials << ',' << format_fixed(r.mean_test_acc) << ','
        << (r.std_test_acc ? format_fixed(*r.std_test_acc) : "") << ',' << fixed_or_na(r.mean_noise_mem_acc)
        << '\n';
  }
  return out.str();
}

std::string ablation_csv(const Report& report) {
  std::ostringstream out;
  out << kAblationHeader << '\n';
  for (const auto& r : report.ablation) {
    out << r.arm << ',' << format_fixed(r.mean_test_acc) << ',' << fixed_or_na(r.mean_noise_mem_acc) << ','
        << fixed_or_na(r.delta_vs_a3w) << '\n';
  }
  return out.str();
}

std::string checks_csv(const Report& report) {
  std::ostringstream out;
  out << kChecksHeader << '\n';
  for (const auto& r : report.checks) {
    out << r.check << ',' << r.case_label << ',' << format_roundtrip(r.value) << ',' << format_roundtrip(r.bound)
        << ',' << (r.pass ? "pass" : "fail") << '\n';
  }
  return out.str();
}

std::string curves_csv(const Report& report) {
  std::ostringstream out;
  out << kCurvesHeader << '\n';
  for (const auto& c : report.curves) {
    const MetricRow& m = c.metrics;
    out << c.arm << ',' << c.target << ',' << c.trial << ',' << m.step << ',' << phase_name(m.phase) << ','
        << format_fixed(m.train_loss) << ',' << format_fixed(m.val_acc) << ',' << format_fixed(m.test_acc) << ','
        << format_fixed(m.clean_src_acc) << ',' << format_fixed(m.noise_mem_acc) << ',' << format_fixed(m.sum_w_min)
        << ',' << format_fixed(m.sum_w_max) << '\n';
  }
  return out.str();
}

std::string embeddings_csv(const Report& report) {
  std::ostringstream out;
  out << kEmbeddingsPrefix;
  const std::size_t width = report.embeddings.empty() ? 0 : report.embeddings.front().features.size();
  for (std::size_t j = 0; j < width; ++j) out << ",z" << j;
  out << '\n';
  for (const auto& e : report.embeddings) {
    if (e.features.size() != width) throw ShapeError("embedding rows have different widths");
    out << arm_name(e.arm) << ',' << e.target << ',' << e.trial << ',' << e.split << ',' << e.domain << ','
        << e.true_label << ',' << e.observed_label;
    for (double v : e.features) out << ',' << format_fixed(v);
    out << '\n';
  }
  return out.str();
}

void emit_report(const Report& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  write_file(out_dir / "results.csv", results_csv(report));
  write_file(out_dir / "ablation.csv", ablation_csv(report));
  write_file(out_dir / "checks.csv", checks_csv(report));
  write_file(out_dir / "curves.csv", curves_csv(report));
  write_file(out_dir / "embeddings.csv", embeddings_csv(report));
}

Report read_report(const std::filesystem::path& in_dir) {
  Report report;
  std::size_t line = 1;
  for (const auto& f : read_table(in_dir / "results.csv", kResultsHeader)) {
    ++line;
    ResultRow r;
    r.arm = f[0];
    r.target = index_field(f[1], line);
    r.trials = index_field(f[2], line);
    r.mean_test_acc = number_or_na(f[3], line);
    if (!f[4].empty()) r.std_test_acc = number_or_na(f[4], line);
    r.mean_noise_mem_acc = number_or_na(f[5], line);
    report.results.push_back(std::move(r));
  }
  line = 1;
  for (const auto& f : read_table(in_dir / "ablation.csv", kAblationHeader)) {
    ++line;
    report.ablation.push_back(
        AblationRow{f[0], number_or_na(f[1], line), number_or_na(f[2], line), number_or_na(f[3], line)});
  }
  line = 1;
  for (const auto& f : read_table(in_dir / "checks.csv", kChecksHeader)) {
    ++line;
    if (f[4] != "pass" && f[4] != "fail") throw ParseError("status must be pass or fail", line);
    report.checks.push_back(CheckRow{f[0], f[1], number_or_na(f[2], line), number_or_na(f[3], line), f[4] == "pass"});
  }
  return report;
}

std::string format_summary(const Report& report) {
  std::ostringstream out;
  if (!report.results.empty()) {
    out << "target accuracy (mean +/- std over trials)\n";
    for (const auto& r : report.results) {
      out << "  " << r.arm << std::string(r.arm.size() < 10 ? 10 - r.arm.size() : 1, ' ') << "domain " << r.target
          << "  " << format_fixed(100.0 * r.mean_test_acc, 2);
      if (r.std_test_acc) out << " +/- " << format_fixed(100.0 * *r.std_test_acc, 2);
      out << "  noise-mem " << (std::isnan(r.mean_noise_mem_acc) ? "n/a" : format_fixed(100.0 * r.mean_noise_mem_acc, 2))
          << '\n';
    }
  }
  if (!report.ablation.empty()) {
    out << "cross-domain average\n";
    for (const auto& r : report.ablation) {
      out << "  " << r.arm << std::string(r.arm.size() < 10 ? 10 - r.arm.size() : 1, ' ')
          << format_fixed(100.0 * r.mean_test_acc, 2) << "  noise-mem "
          << (std::isnan(r.mean_noise_mem_acc) ? "n/a" : format_fixed(100.0 * r.mean_noise_mem_acc, 2));
      if (!std::isnan(r.delta_vs_a3w)) out << "  delta " << format_fixed(100.0 * r.delta_vs_a3w, 2);
      out << '\n';
    }
  }
  if (!report.checks.empty()) {
    std::size_t failed = 0;
    for (const auto& c : report.checks) failed += !c.pass;
    out << "checks: " << report.checks.size() - failed << " passed, " << failed << " failed\n";
  }
  return out.str();
}

}  // namespace a3w
