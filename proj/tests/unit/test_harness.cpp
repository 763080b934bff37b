#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "a3w/error.hpp"
#include "a3w/harness/checks.hpp"
#include "a3w/harness/config_file.hpp"
#include "a3w/harness/experiment_config.hpp"
#include "a3w/harness/experiments.hpp"
#include "a3w/harness/report.hpp"
#include "a3w/objective/losses.hpp"

using namespace a3w;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse_text(const std::string& text) {
  std::istringstream in(text);
  ConfigFile f = ConfigFile::parse(in);
  return parse_experiment_config(f);
}

const char* kTinyConfig = R"(# small and fast
per_class_per_domain = 10
anchor_dim = 8
n_steps = 20
eval_every = 10
batch_size = 8
learning_rate = 0.01
hidden_dim = 8
feature_dim = 8
)";

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("a3w_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("config file syntax") {
  std::istringstream in("# comment\n\n  lambda = 0.2  # trailing\nname=a b\n");
  ConfigFile f = ConfigFile::parse(in);
  CHECK(f.take_double("lambda") == 0.2);
  CHECK(f.take_string("name") == "a b");
  CHECK_FALSE(f.take_double("missing").has_value());
  CHECK_NOTHROW(f.reject_unknown());

  std::istringstream no_eq("lambda 0.2\n");
  CHECK_THROWS_AS(ConfigFile::parse(no_eq), ConfigError);
  std::istringstream dup("a = 1\na = 2\n");
  CHECK_THROWS_AS(ConfigFile::parse(dup), ConfigError);

  std::istringstream typed("n = -3\nflag = maybe\nlist = 1, 2,3\n");
  ConfigFile t = ConfigFile::parse(typed);
  CHECK_THROWS_AS(t.take_size("n"), ConfigError);
  CHECK_THROWS_AS(t.take_bool("flag"), ConfigError);
  CHECK(t.take_size_list("list") == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("experiment config parsing") {
  const auto cfg = parse_text(kTinyConfig);
  CHECK(cfg.generator.per_class_per_domain == 10);
  CHECK(cfg.train.n_steps == 20);
  CHECK(cfg.train.objective.lambda == 0.1);
  CHECK(cfg.train.objective.tau == 10.0);
  CHECK(cfg.trial_seeds() == std::vector<std::uint64_t>{0, 1, 2});
  CHECK(cfg.target_domains(4) == std::vector<std::size_t>{0, 1, 2, 3});

  try {
    parse_text("lambda = 0.1\nlamda = 0.2\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    CHECK(std::string(e.what()).find("lamda") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_text("trials = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_text("noise = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_text("targets = 7\n"), ConfigError);
  CHECK_THROWS_AS(parse_text("anchor_source = file\n"), ConfigError);
  CHECK_THROWS_AS(parse_text("n_steps = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_text("trials = 2\nseeds = 1,2,3\n"), ConfigError);
  CHECK(parse_text("seeds = 5, 9\n").trials == 2);
  CHECK(parse_text("projector_init = anchor_seeded\n").train.projector_init == ProjectorInit::anchor_seeded);
}

TEST_CASE("cross-test counting and report layout") {
  const auto cfg = parse_text(kTinyConfig);
  const auto result = run_cross_test(cfg);
  std::size_t a3w_runs = 0;
  std::size_t erm_runs = 0;
  for (const auto& r : result.runs) {
    a3w_runs += r.arm == Arm::a3w;
    erm_runs += r.arm == Arm::erm;
  }
  CHECK(a3w_runs == 12);
  CHECK(erm_runs == 12);
  const Report report = build_report(result);
  CHECK(report.results.size() == 8);
  for (const auto& row : report.results) {
    CHECK(row.trials == 3);
    REQUIRE(row.std_test_acc.has_value());
    CHECK(*row.std_test_acc >= 0.0);
  }
  REQUIRE(report.ablation.size() == 2);
  CHECK(report.ablation[0].delta_vs_a3w == 0.0);

  // Two eval events (steps 10 and 20) per run.
  CHECK(report.curves.size() == 2 * result.runs.size());
  const auto curves = curves_csv(report);
  CHECK(count_lines(curves) == 1 + 2 * result.runs.size());

  const auto results = results_csv(report);
  CHECK(results.rfind("arm,target_domain,trials,mean_test_acc,std_test_acc,mean_noise_mem_acc\n", 0) == 0);
  std::istringstream lines(results);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) CHECK(std::count(line.begin(), line.end(), ',') == 5);

  // Embeddings: trial 0 of a3w and erm for each of the 4 targets.
  const std::size_t per_run = 3 * 40 + 32;  // train (3 sources x 40) + test (80% of 40)
  CHECK(report.embeddings.size() == 8 * per_run);
  CHECK(report.embeddings.front().features.size() == 8);
}

TEST_CASE("noise-free cross-test reports n/a memorization") {
  auto cfg = parse_text(std::string(kTinyConfig) + "noise = 0\ntargets = 1\n");
  const auto report = build_report(run_cross_test(cfg));
  REQUIRE(report.results.size() == 2);
  for (const auto& row : report.results) CHECK(std::isnan(row.mean_noise_mem_acc));
  CHECK(results_csv(report).find(",n/a\n") != std::string::npos);
}

TEST_CASE("single trial omits the standard deviation") {
  auto cfg = parse_text(std::string(kTinyConfig) + "seeds = 4\ntrials = 1\ntargets = 2\nablations = true\n");
  const auto result = run_cross_test(cfg);
  CHECK(result.runs.size() == 4);
  const auto report = build_report(result);
  REQUIRE(report.results.size() == 4);
  for (const auto& row : report.results) CHECK_FALSE(row.std_test_acc.has_value());
  REQUIRE(report.arm_summary("no_weight") != nullptr);
  // The no-anchor arm uses uniform weights and no alignment term, i.e. ERM.
  CHECK(report.arm_summary("no_anchor")->mean_test_acc == report.arm_summary("erm")->mean_test_acc);
}

TEST_CASE("report emission round-trips and is deterministic") {
  const auto cfg = parse_text(std::string(kTinyConfig) + "targets = 0, 3\n");
  const Report report = build_report(run_cross_test(cfg));
  const auto dir_a = scratch_dir("report_a");
  const auto dir_b = scratch_dir("report_b");
  emit_report(report, dir_a);
  emit_report(build_report(run_cross_test(cfg)), dir_b);
  for (const char* name : {"results.csv", "ablation.csv", "checks.csv", "curves.csv", "embeddings.csv"}) {
    REQUIRE(fs::exists(dir_a / name));
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));
  }
  const Report back = read_report(dir_a);
  REQUIRE(back.results.size() == report.results.size());
  for (std::size_t i = 0; i < back.results.size(); ++i) {
    CHECK(back.results[i].arm == report.results[i].arm);
    CHECK(back.results[i].target == report.results[i].target);
    CHECK(std::abs(back.results[i].mean_test_acc - report.results[i].mean_test_acc) <= 5e-7);
    CHECK(std::abs(*back.results[i].std_test_acc - *report.results[i].std_test_acc) <= 5e-7);
  }
  REQUIRE(back.ablation.size() == report.ablation.size());
  CHECK(std::abs(back.ablation[1].delta_vs_a3w - report.ablation[1].delta_vs_a3w) <= 5e-7);
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("empty report writes headers only") {
  const auto dir = scratch_dir("empty");
  emit_report(Report{}, dir);
  CHECK(slurp(dir / "results.csv") == "arm,target_domain,trials,mean_test_acc,std_test_acc,mean_noise_mem_acc\n");
  CHECK(slurp(dir / "ablation.csv") == "arm,mean_test_acc,mean_noise_mem_acc,delta_vs_a3w\n");
  CHECK(slurp(dir / "checks.csv") == "check,case,value,bound,status\n");
  CHECK(count_lines(slurp(dir / "curves.csv")) == 1);
  CHECK(count_lines(slurp(dir / "embeddings.csv")) == 1);
  const Report back = read_report(dir);
  CHECK(back.results.empty());
  fs::remove_all(dir);
  CHECK_THROWS_AS(read_report(dir), IoError);
}

TEST_CASE("check rows survive the report round trip") {
  Report report;
  report.checks = check_theorem1().rows;
  const auto dir = scratch_dir("checks");
  emit_report(report, dir);
  const Report back = read_report(dir);
  REQUIRE(back.checks.size() == 45);
  for (std::size_t i = 0; i < back.checks.size(); ++i) {
    CHECK(back.checks[i].value == report.checks[i].value);
    CHECK(back.checks[i].case_label == report.checks[i].case_label);
    CHECK(back.checks[i].pass);
  }
  fs::remove_all(dir);
}

TEST_CASE("sensitivity sweep counting and replay") {
  auto cfg = parse_text(std::string(kTinyConfig) +
                        "lambda_grid = 0.3\ntau_grid = 5\nlr_grid = 0.02\ninterval_grid = 0.2\n");
  const std::vector<SweepParam> all{SweepParam::lambda, SweepParam::tau, SweepParam::learning_rate,
                                    SweepParam::interval};
  const auto rows = sensitivity_sweep(cfg, all);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].value == 0.3);
  CHECK(rows[3].param == SweepParam::interval);

  const auto taus = sensitivity_sweep(cfg, SweepParam::tau, {5.0, 10.0, 15.0});
  const auto again = sensitivity_sweep(cfg, SweepParam::tau, {5.0, 10.0, 15.0});
  REQUIRE(taus.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(taus[i].test_acc == again[i].test_acc);
    CHECK(taus[i].noise_mem_acc == again[i].noise_mem_acc);
  }
  CHECK_THROWS_AS(sensitivity_sweep(cfg, SweepParam::learning_rate, {-1.0}), ConfigError);
  CHECK(parse_sweep_param("lr") == SweepParam::learning_rate);
  CHECK_FALSE(parse_sweep_param("momentum").has_value());
}

TEST_CASE("theorem1 check") {
  CHECK(theorem1_bound(0.5, 0.2, 10.0) == doctest::Approx(0.5 / (0.5 + 0.5 * std::exp(2.0))));
  CHECK(theorem1_bound(0.5, 0.2, 10.0) == doctest::Approx(0.11920).epsilon(1e-4));
  const auto outcome = check_theorem1();
  CHECK(outcome.passed());
  CHECK(outcome.rows.size() == 45);
  for (const auto& row : outcome.rows) {
    if (row.case_label.find("tau=0") != std::string::npos && row.case_label.find("tau=0.") == std::string::npos) {
      CHECK(row.value == doctest::Approx(row.bound).epsilon(1e-12));
    }
  }
  CHECK_NOTHROW(outcome.require());
  Theorem1Grid bad;
  bad.alphas = {0.333};
  CHECK_THROWS_AS(check_theorem1(bad), InputError);
}

TEST_CASE("lemma1 check") {
  // v on the anchor: the loss is at its minimum.
  const std::vector<double> a{0.0, 0.6, 0.8};
  CHECK(norm(anchor_loss(a, a).grad) < 1e-15);
  const std::vector<double> v{2.0, 0.0, 0.0};
  CHECK(norm(anchor_loss(v, a).grad) <= 0.5 + 1e-12);

  Lemma1Stats stats;
  const auto outcome = check_lemma1(1000, {2, 8, 32}, 0, &stats);
  CHECK(outcome.passed());
  CHECK(stats.pairs == 3000);
  CHECK(stats.max_grad_times_norm <= 1.0 + 1e-9);
  CHECK(stats.max_fd_error <= 1e-5);
}

TEST_CASE("weighted distribution check") {
  std::vector<DistributionRow> table;
  const auto outcome = check_weighted_distribution({}, &table);
  CHECK(outcome.passed());
  REQUIRE(table.size() == 6);
  CHECK(table.front().tau == 0.0);
  CHECK(table.back().tv < table.front().tv);

  DistributionSpec flat;
  flat.delta = 0.0;
  const auto skipped = check_weighted_distribution(flat);
  CHECK(skipped.passed());
  CHECK(skipped.rows.empty());
  CHECK(skipped.notices.size() == 1);
}

TEST_CASE("gradient check") {
  GradientStats stats;
  const auto outcome = check_gradients(20, 0, &stats);
  CHECK(outcome.passed());
  CHECK(stats.instances == 20);
  CHECK(stats.max_parameters <= 1000);
  CHECK(stats.max_warmup_error < 1e-4);
  CHECK(stats.max_total_error < 1e-4);
}
