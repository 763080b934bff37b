#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "a3w/anchors/anchor_file.hpp"
#include "a3w/anchors/anchor_set.hpp"
#include "a3w/anchors/toy_encoder.hpp"
#include "a3w/datagen/dataset.hpp"
#include "a3w/error.hpp"
#include "a3w/harness/checks.hpp"
#include "a3w/harness/experiment_config.hpp"
#include "a3w/harness/experiments.hpp"
#include "a3w/harness/report.hpp"
#include "a3w/model/checkpoint.hpp"
#include "a3w/numkit/text.hpp"
#include "a3w/simd/kernels.hpp"

namespace fs = std::filesystem;
using namespace a3w;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  for (auto tok : split_tokens(text, ", \t")) out.emplace_back(tok);
  return out;
}

int gen_anchors(const std::string& source, const std::string& classes, std::size_t dim, const fs::path& out,
                std::uint64_t seed, const std::optional<fs::path>& in) {
  std::optional<AnchorSet> anchors;
  if (source == "file") {
    if (!in) throw ConfigError("--source file needs --in");
    auto loaded = read_anchor_file(*in);
    for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
    anchors = std::move(loaded.anchors);
  } else {
    const auto names = split_list(classes);
    if (names.size() < 2) throw ConfigError("--classes needs at least two comma-separated names");
    if (source == "toy") {
      anchors = toy_anchors(make_toy_encoder(seed, dim), names);
    } else if (source == "oracle") {
      GeneratorSpec spec;
      spec.num_classes = names.size();
      spec.per_class_per_domain = 1;
      spec.rho = std::vector<double>(spec.num_domains, 0.0);
      anchors = oracle_anchors(make_domains(spec, seed).generator->prototypes, dim, seed, names);
    } else {
      throw ConfigError("--source must be oracle, toy or file");
    }
  }
  write_anchor_file(*anchors, out);
  std::cout << "wrote " << anchors->num_classes() << " anchors of dimension " << anchors->dim() << " to "
            << out.string() << '\n';
  return kExitOk;
}

int train(const fs::path& config, std::size_t target, const fs::path& out, const std::string& arm_text) {
  const auto cfg = load_experiment_config(config);
  const auto arm = parse_arm(arm_text);
  if (!arm) throw ConfigError("--arm must be a3w, erm, no_anchor or no_weight");
  const std::uint64_t seed = cfg.trial_seeds().front();
  const TrialData data = prepare_trial(cfg, target, seed);
  for (const auto& w : data.warnings) std::cerr << "warning: " << w << '\n';
  TrainingResult full;
  const RunRecord rec = run_arm(cfg, data, *arm, 0, seed, &full);

  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create " + out.string() + ": " + ec.message());
  {
    std::ofstream metrics(out / "metrics.csv", std::ios::binary);
    if (!metrics) throw IoError("cannot write " + (out / "metrics.csv").string());
    write_metric_csv(metrics, full.state.log);
  }
  write_checkpoint(Checkpoint{full.state.params, full.state.ema}, out / "checkpoint.txt");
  std::cout << "arm " << arm_name(*arm) << ", target domain " << target << ", seed " << seed << '\n'
            << "selected step " << rec.selected_step << ": test accuracy " << format_fixed(100.0 * rec.test_acc, 2)
            << "%\n"
            << "final noise memorization "
            << (std::isnan(rec.noise_mem_acc) ? std::string("n/a") : format_fixed(100.0 * rec.noise_mem_acc, 2) + "%")
            << '\n';
  return kExitOk;
}

int cross_test(const fs::path& config, const fs::path& out) {
  const auto cfg = load_experiment_config(config);
  const auto result = run_cross_test(cfg);
  const Report report = build_report(result);
  emit_report(report, out);
  std::cout << format_summary(report);
  return kExitOk;
}

int sweep(const fs::path& config, const std::string& param_text, const std::string& grid_text,
          const std::optional<fs::path>& out) {
  const auto cfg = load_experiment_config(config);
  const auto param = parse_sweep_param(param_text);
  if (!param) throw ConfigError("--param must be lambda, tau, lr or interval");
  std::vector<double> grid;
  for (const auto& tok : split_list(grid_text)) {
    const auto v = parse_double(tok);
    if (!v) throw ConfigError("bad grid value '" + tok + "'");
    grid.push_back(*v);
  }
  const auto rows = sensitivity_sweep(cfg, *param, grid);
  std::ostringstream csv;
  csv << "param,value,test_acc,noise_mem_acc\n";
  for (const auto& r : rows) {
    csv << sweep_param_name(r.param) << ',' << format_roundtrip(r.value) << ',' << format_fixed(r.test_acc) << ','
        << (std::isnan(r.noise_mem_acc) ? std::string("n/a") : format_fixed(r.noise_mem_acc)) << '\n';
  }
  std::cout << csv.str();
  if (out) {
    fs::create_directories(*out);
    std::ofstream file(*out / "sweep.csv", std::ios::binary);
    if (!file) throw IoError("cannot write " + (*out / "sweep.csv").string());
    file << csv.str();
  }
  return kExitOk;
}

int check(const std::string& which, std::uint64_t seed, const std::optional<fs::path>& out) {
  std::vector<std::string> names = which == "all" ? std::vector<std::string>{"theorem1", "lemma1", "distribution",
                                                                             "gradients"}
                                                  : std::vector<std::string>{which};
  Report report;
  bool ok = true;
  for (const auto& name : names) {
    CheckOutcome outcome;
    if (name == "theorem1") {
      outcome = check_theorem1();
    } else if (name == "lemma1") {
      Lemma1Stats stats;
      outcome = check_lemma1(1000, {2, 8, 32}, seed, &stats);
      std::cout << "lemma1: " << stats.pairs << " pairs, max |grad|*|v| = " << format_roundtrip(stats.max_grad_times_norm)
                << ", max finite-difference error = " << format_roundtrip(stats.max_fd_error) << '\n';
    } else if (name == "distribution") {
      DistributionSpec spec;
      spec.seed = seed;
      std::vector<DistributionRow> table;
      outcome = check_weighted_distribution(spec, &table);
      for (const auto& r : table) {
        std::cout << "distribution: tau " << format_roundtrip(r.tau) << "  TV " << format_fixed(r.tv) << '\n';
      }
    } else if (name == "gradients") {
      GradientStats stats;
      outcome = check_gradients(20, seed, &stats);
      std::cout << "gradients: " << stats.instances << " instances (<= " << stats.max_parameters
                << " parameters), max relative error warm-up " << format_roundtrip(stats.max_warmup_error)
                << ", weighted " << format_roundtrip(stats.max_total_error) << '\n';
    } else {
      throw ConfigError("unknown check '" + name + "'");
    }
    for (const auto& n : outcome.notices) std::cout << "notice: " << n << '\n';
    for (const auto& v : outcome.violations) std::cout << "violation: " << v << '\n';
    std::size_t passed = 0;
    for (const auto& r : outcome.rows) passed += r.pass;
    std::cout << name << ": " << (outcome.passed() ? "PASS" : "FAIL") << " (" << passed << "/" << outcome.rows.size()
              << " rows)\n";
    ok = ok && outcome.passed();
    report.checks.insert(report.checks.end(), outcome.rows.begin(), outcome.rows.end());
  }
  if (out) emit_report(report, *out);
  return ok ? kExitOk : kExitCheckFailed;
}

int show_report(const fs::path& in) {
  std::cout << format_summary(read_report(in));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anchor-aligned adaptive weighting for noisy-label domain generalization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "a3w 0.1.0");
  bool show_simd = false;
  app.add_flag("--simd-info", show_simd, "print the active SIMD backend");

  std::string source = "oracle", classes, arm = "a3w", param, grid, which;
  std::size_t dim = 32, target = 0;
  std::uint64_t seed = 0;
  fs::path out, config, in_path;
  std::optional<fs::path> in_file, out_dir;

  auto* gen = app.add_subcommand("gen-anchors", "write an anchor file");
  gen->add_option("--source", source, "oracle, toy or file")->check(CLI::IsMember({"oracle", "toy", "file"}));
  gen->add_option("--classes", classes, "comma-separated class names");
  gen->add_option("--dim", dim, "anchor dimension")->check(CLI::PositiveNumber);
  gen->add_option("--out", out, "output anchor file")->required();
  gen->add_option("--seed", seed, "seed for the oracle map or toy encoder");
  gen->add_option("--in", in_file, "anchor file to re-normalize (source = file)");

  auto* tr = app.add_subcommand("train", "train one model on one target domain");
  tr->add_option("--config", config, "experiment config file")->required();
  tr->add_option("--target-domain", target, "held-out domain")->required();
  tr->add_option("--out", out, "output directory")->required();
  tr->add_option("--arm", arm, "a3w, erm, no_anchor or no_weight");

  auto* ct = app.add_subcommand("cross-test", "leave-one-domain-out experiment");
  ct->add_option("--config", config, "experiment config file")->required();
  ct->add_option("--out", out, "report directory")->required();

  auto* sw = app.add_subcommand("sweep", "one-parameter sensitivity sweep");
  sw->add_option("--config", config, "experiment config file")->required();
  sw->add_option("--param", param, "lambda, tau, lr or interval")->required();
  sw->add_option("--grid", grid, "comma-separated values")->required();
  sw->add_option("--out", out_dir, "directory for sweep.csv");

  auto* ck = app.add_subcommand("check", "numerical property checks");
  ck->add_option("name", which, "theorem1, lemma1, distribution, gradients or all")
      ->required()
      ->check(CLI::IsMember({"theorem1", "lemma1", "distribution", "gradients", "all"}));
  ck->add_option("--seed", seed, "sampling seed");
  ck->add_option("--out", out_dir, "directory for checks.csv");

  auto* rp = app.add_subcommand("report", "summarize an emitted report");
  rp->add_option("--in", in_path, "report directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (show_simd) std::cerr << "simd backend: " << simd::name(simd::active_backend()) << '\n';
  try {
    if (*gen) return gen_anchors(source, classes, dim, out, seed, in_file);
    if (*tr) return train(config, target, out, arm);
    if (*ct) return cross_test(config, out);
    if (*sw) return sweep(config, param, grid, out_dir);
    if (*ck) return check(which, seed, out_dir);
    if (*rp) return show_report(in_path);
  } catch (const CheckFailure& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InputError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
