#include "a3w/harness/checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "a3w/anchors/anchor_set.hpp"
#include "a3w/error.hpp"
#include "a3w/model/network.hpp"
#include "a3w/numkit/finite_diff.hpp"
#include "a3w/numkit/rng.hpp"
#include "a3w/numkit/text.hpp"
#include "a3w/objective/losses.hpp"
#include "a3w/objective/total_loss.hpp"

namespace a3w {

void CheckOutcome::require() const {
  if (!violations.empty()) throw CheckFailure(violations.front());
}

namespace {

std::string cell(std::initializer_list<std::pair<const char*, double>> items) {
  std::string out;
  for (const auto& [k, v] : items) {
    if (!out.empty()) out += ' ';
    out += k;
    out += '=';
    out += format_roundtrip(v);
  }
  return out;
}

// Clean similarities evenly spread over [0.3, 0.5] and corrupted ones over
// [0.1 - delta, 0.3 - delta], so the margin is exactly delta.
std::vector<double> margin_costs(std::size_t n, std::size_t corrupted, double delta) {
  const double clean_low = 0.3;
  std::vector<double> costs(n);
  const std::size_t clean = n - corrupted;
  for (std::size_t i = 0; i < corrupted; ++i) {
    const double t = corrupted > 1 ? static_cast<double>(i) / static_cast<double>(corrupted - 1) : 1.0;
    costs[i] = -(clean_low - delta - 0.2 * (1.0 - t));
  }
  for (std::size_t i = 0; i < clean; ++i) {
    const double t = clean > 1 ? static_cast<double>(i) / static_cast<double>(clean - 1) : 0.0;
    costs[corrupted + i] = -(clean_low + 0.2 * t);
  }
  return costs;
}

}  // namespace

double theorem1_bound(double alpha, double delta, double tau) {
  return alpha / (alpha + (1.0 - alpha) * std::exp(tau * delta));
}

CheckOutcome check_theorem1(const Theorem1Grid& grid) {
  CheckOutcome out;
  for (double alpha : grid.alphas) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
    const double exact = alpha * static_cast<double>(grid.batch);
    const auto corrupted = static_cast<std::size_t>(std::llround(exact));
    if (std::abs(exact - static_cast<double>(corrupted)) > 1e-9) {
      throw InputError("alpha * batch must be an integer for alpha=" + format_roundtrip(alpha));
    }
    for (double delta : grid.deltas) {
      if (!(delta > 0.0)) throw InputError("delta must be > 0");
      const auto costs = margin_costs(grid.batch, corrupted, delta);
      double previous = 2.0;
      for (double tau : grid.taus) {
        if (tau < 0.0) throw InputError("tau must be >= 0");
        const auto w = compute_weights(costs, tau);
        double mass = 0.0;
        for (std::size_t i = 0; i < corrupted; ++i) mass += w[i];
        const double bound = theorem1_bound(alpha, delta, tau);
        const std::string label = cell({{"alpha", alpha}, {"delta", delta}, {"tau", tau}});
        bool ok = mass <= bound + 1e-12;
        if (!ok) out.violations.push_back("theorem1 bound violated at " + label + ": mass " + format_roundtrip(mass));
        if (tau == 0.0 && std::abs(mass - alpha) > 1e-12) {
          ok = false;
          out.violations.push_back("theorem1 mass at tau=0 differs from alpha at " + label);
        }
        if (!(mass < previous)) {
          ok = false;
          out.violations.push_back("theorem1 mass not strictly decreasing in tau at " + label);
        }
        previous = mass;
        out.rows.push_back(CheckRow{"theorem1", label, mass, bound, ok});
      }
    }
  }
  return out;
}

CheckOutcome check_lemma1(std::size_t samples_per_dim, const std::vector<std::size_t>& dims, std::uint64_t seed,
                          Lemma1Stats* stats) {
  if (samples_per_dim < 1) throw InputError("lemma1 needs at least one sample");
  CheckOutcome out;
  Lemma1Stats local;
  for (std::size_t dim : dims) {
    if (dim < 2) throw InputError("lemma1 dimensions must be >= 2");
    RngStream rng = RngStream(seed, streams::checks).substream(dim);
    double worst_stat = 0.0;
    double worst_fd = 0.0;
    std::vector<double> a(dim), v(dim);
    for (std::size_t s = 0; s < samples_per_dim; ++s) {
      for (auto& x : a) x = rng.gaussian();
      a = normalize_anchor(a);
      for (auto& x : v) x = rng.gaussian();
      const double scale = std::exp(std::log(0.1) + rng.uniform() * std::log(100.0)) / norm(v);
      for (auto& x : v) x *= scale;
      const double v_norm = norm(v);

      const auto loss = anchor_loss(v, a);
      const double g_norm = norm(loss.grad);
      const auto numeric =
          finite_diff_grad([&](std::span<const double> p) { return anchor_loss(p, a).value; }, v, 1e-5);
      double fd_error = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        fd_error = std::max(fd_error, std::abs(loss.grad[j] - numeric[j]) / std::max(1.0, std::abs(loss.grad[j])));
      }
      worst_stat = std::max(worst_stat, g_norm * v_norm);
      worst_fd = std::max(worst_fd, fd_error);
      ++local.pairs;
      if (g_norm > 1.0 / v_norm + 1e-9) {
        out.violations.push_back("lemma1 bound violated (dim " + std::to_string(dim) + ", sample " +
                                 std::to_string(s) + "): |grad| " + format_roundtrip(g_norm) + ", |v| " +
                                 format_roundtrip(v_norm));
      }
      if (fd_error > 1e-5) {
        out.violations.push_back("lemma1 finite-difference mismatch (dim " + std::to_string(dim) + ", sample " +
                                 std::to_string(s) + "): " + format_roundtrip(fd_error));
      }
    }
    local.max_grad_times_norm = std::max(local.max_grad_times_norm, worst_stat);
    local.max_fd_error = std::max(local.max_fd_error, worst_fd);
    const std::string label = "dim=" + std::to_string(dim) + " pairs=" + std::to_string(samples_per_dim);
    out.rows.push_back(CheckRow{"lemma1_grad_norm", label, worst_stat, 1.0, worst_stat <= 1.0 + 1e-9});
    out.rows.push_back(CheckRow{"lemma1_fd_agreement", label, worst_fd, 1e-5, worst_fd <= 1e-5});
  }
  if (stats) *stats = local;
  return out;
}

CheckOutcome check_weighted_distribution(const DistributionSpec& spec, std::vector<DistributionRow>* table) {
  CheckOutcome out;
  if (spec.classes < 2 || spec.batch < spec.classes) throw InputError("distribution batch is too small");
  if (!(spec.delta > 0.0)) {
    out.notices.push_back("weighted-distribution check skipped: the batch has no similarity margin");
    return out;
  }
  const std::size_t per_class = spec.batch / spec.classes;
  const auto corrupt_per_class = static_cast<std::size_t>(std::llround(spec.alpha * static_cast<double>(per_class)));
  if (corrupt_per_class == 0 || corrupt_per_class >= per_class) {
    throw InputError("alpha leaves no corrupted or no clean samples per class");
  }
  const std::size_t clean_per_class = per_class - corrupt_per_class;
  RngStream rng(spec.seed, streams::checks, 1);

  // Clean samples of every class share the same similarity profile, so the
  // clean part of the weighted marginal stays balanced for every tau.
  std::vector<std::size_t> observed;
  std::vector<double> costs;
  std::vector<double> clean_marginal(spec.classes, 0.0);
  for (std::size_t c = 0; c < spec.classes; ++c) {
    for (std::size_t i = 0; i < clean_per_class; ++i) {
      const double t = clean_per_class > 1 ? static_cast<double>(i) / static_cast<double>(clean_per_class - 1) : 0.0;
      observed.push_back(c);
      costs.push_back(-(0.3 + 0.2 * t));
    }
    for (std::size_t i = 0; i < corrupt_per_class; ++i) {
      const auto k = rng.uniform_index(spec.classes - 1);
      observed.push_back(k < c ? k : k + 1);
      const double t =
          corrupt_per_class > 1 ? static_cast<double>(i) / static_cast<double>(corrupt_per_class - 1) : 1.0;
      costs.push_back(-(0.3 - spec.delta - 0.2 * (1.0 - t)));
    }
    clean_marginal[c] = 1.0 / static_cast<double>(spec.classes);
  }

  auto tv_at = [&](double tau) {
    const auto w = compute_weights(costs, tau);
    std::vector<double> marginal(spec.classes, 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) marginal[observed[i]] += w[i];
    double tv = 0.0;
    for (std::size_t c = 0; c < spec.classes; ++c) tv += std::abs(marginal[c] - clean_marginal[c]);
    return 0.5 * tv;
  };

  const double tv0 = tv_at(0.0);
  if (tv0 == 0.0) {
    out.notices.push_back("weighted-distribution check skipped: the corruption left the label marginal unchanged");
    return out;
  }
  for (double tau : spec.taus) {
    const double tv = tv_at(tau);
    if (table) table->push_back(DistributionRow{tau, tv});
    const bool ok = tau == 0.0 || tv <= tv0;
    const std::string label = cell({{"alpha", spec.alpha}, {"delta", spec.delta}, {"tau", tau}});
    out.rows.push_back(CheckRow{"weighted_distribution_tv", label, tv, tv0, ok});
    if (!ok) out.violations.push_back("weighted TV exceeds the unweighted TV at " + label);
  }
  const double tv10 = tv_at(10.0);
  if (!(tv10 < tv0)) {
    out.violations.push_back("weighted TV at tau=10 (" + format_roundtrip(tv10) + ") is not below tau=0 (" +
                             format_roundtrip(tv0) + ")");
  }
  return out;
}

namespace {

double frozen_objective(std::span<const Sample> batch, const ModelParams& p, const AnchorSet& anchors,
                        const ObjectiveConfig& cfg, const std::vector<double>& weights) {
  const auto losses = total_loss(batch, p, anchors, cfg);
  double total = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    total += weights[i] * (cfg.lambda * losses.alignment[i] + losses.cross_entropy[i]);
  }
  return total;
}

}  // namespace

CheckOutcome check_gradients(std::size_t instances, std::uint64_t seed, GradientStats* stats) {
  CheckOutcome out;
  GradientStats local;
  for (std::size_t k = 0; k < instances; ++k) {
    RngStream rng = RngStream(seed, streams::checks, 2).substream(k);
    ModelDims dims;
    dims.input = 2 + rng.uniform_index(5);
    dims.hidden = 2 + rng.uniform_index(8);
    dims.feature = 2 + rng.uniform_index(6);
    dims.classes = 2 + rng.uniform_index(3);
    dims.anchor_dim = 2 + rng.uniform_index(6);
    ModelParams params = init_model(dims, 1.0, rng);
    for_each_tensor(params, [&](const std::string&, Partition, std::span<double> t) {
      for (auto& v : t) v += 0.2 * rng.gaussian();
    });
    Matrix raw(dims.classes, dims.anchor_dim);
    for (auto& v : raw.values()) v = rng.gaussian();
    const AnchorSet anchors = AnchorSet::from_unnormalized(default_class_names(dims.classes), raw);

    std::vector<Sample> batch(2 + rng.uniform_index(7));
    for (auto& s : batch) {
      s.x.resize(dims.input);
      for (auto& v : s.x) v = rng.gaussian();
      s.true_label = s.observed_label = rng.uniform_index(dims.classes);
    }
    ObjectiveConfig obj;
    obj.lambda = 0.05 + rng.uniform();
    obj.tau = 10.0 * rng.uniform();

    const std::size_t count = params.parameter_count();
    local.max_parameters = std::max(local.max_parameters, count);
    if (count > 1000) throw StateError("gradient-check instance exceeds 1000 parameters");

    const auto theta = flatten(params);
    ModelParams probe = params;
    const auto warm = warmup_batch_loss(batch, params);
    const auto warm_fd = finite_diff_grad(
        [&](std::span<const double> flat) {
          unflatten(probe, flat);
          return warmup_batch_loss(batch, probe).total;
        },
        theta, 1e-5);
    const double warm_err = max_relative_error(flatten(warm.grad), warm_fd);

    const auto total = total_loss(batch, params, anchors, obj);
    const auto total_fd = finite_diff_grad(
        [&](std::span<const double> flat) {
          unflatten(probe, flat);
          return frozen_objective(batch, probe, anchors, obj, total.weights);
        },
        theta, 1e-5);
    const double total_err = max_relative_error(flatten(total.grad), total_fd);

    local.max_warmup_error = std::max(local.max_warmup_error, warm_err);
    local.max_total_error = std::max(local.max_total_error, total_err);
    ++local.instances;
    const std::string label = "instance=" + std::to_string(k) + " params=" + std::to_string(count);
    out.rows.push_back(CheckRow{"gradient_warmup", label, warm_err, 1e-4, warm_err <= 1e-4});
    out.rows.push_back(CheckRow{"gradient_total", label, total_err, 1e-4, total_err <= 1e-4});
    if (warm_err > 1e-4) out.violations.push_back("warm-up gradient mismatch at " + label);
    if (total_err > 1e-4) out.violations.push_back("weighted-loss gradient mismatch at " + label);
  }
  if (stats) *stats = local;
  return out;
}

}  // namespace a3w
