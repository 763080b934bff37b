#include <doctest.h>

#include <cmath>
#include <numbers>

#include "a3w/error.hpp"
#include "a3w/model/network.hpp"
#include "a3w/numkit/finite_diff.hpp"
#include "a3w/objective/losses.hpp"
#include "a3w/objective/total_loss.hpp"

using namespace a3w;

namespace {

std::vector<double> random_unit(RngStream& rng, std::size_t dim) {
  std::vector<double> a(dim);
  for (auto& x : a) x = rng.gaussian();
  const double n = norm(a);
  for (auto& x : a) x /= n;
  return a;
}

ModelParams random_net(std::uint64_t seed, ModelDims dims) {
  RngStream rng(seed, streams::model_init);
  auto p = init_model(dims, 1.0, rng);
  for_each_tensor(p, [&](const std::string&, Partition, std::span<double> t) {
    for (auto& v : t) v += 0.3 * rng.gaussian();
  });
  return p;
}

std::vector<Sample> random_batch(RngStream& rng, std::size_t n, std::size_t in, std::size_t classes) {
  std::vector<Sample> batch(n);
  for (auto& s : batch) {
    s.x.resize(in);
    for (auto& v : s.x) v = rng.gaussian();
    s.true_label = s.observed_label = rng.uniform_index(classes);
  }
  return batch;
}

AnchorSet random_anchors(RngStream& rng, std::size_t classes, std::size_t dim) {
  Matrix m(classes, dim);
  for (auto& v : m.values()) v = rng.gaussian();
  return AnchorSet::from_unnormalized(default_class_names(classes), m);
}

// Independent evaluation of sum_i w_i (lambda L_i + CE_i) with externally
// supplied weights (or freshly computed ones when `weights` is empty).
double frozen_total(std::span<const Sample> batch, const ModelParams& p, const AnchorSet& anchors, double lambda,
                    double tau, const std::vector<double>& weights) {
  std::vector<double> align(batch.size()), ce(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto cache = forward(p, batch[i].x);
    const auto v = project(p, batch[i].observed_label, cache.features);
    const auto a = anchors.anchor(batch[i].observed_label);
    double dot = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) dot += v[j] * a[j];
    align[i] = -dot / norm(v);
    double peak = cache.logits[0];
    for (double l : cache.logits) peak = std::max(peak, l);
    double sum = 0.0;
    for (double l : cache.logits) sum += std::exp(l - peak);
    ce[i] = peak + std::log(sum) - cache.logits[batch[i].observed_label];
  }
  std::vector<double> w = weights;
  if (w.empty()) {
    w.resize(batch.size());
    double z = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) z += w[i] = std::exp(-tau * align[i]);
    for (auto& x : w) x /= z;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) total += w[i] * (lambda * align[i] + ce[i]);
  return total;
}

}  // namespace

TEST_CASE("anchor_loss examples") {
  const std::vector<double> a{0.6, 0.8};
  const auto colinear = anchor_loss(std::vector<double>{1.2, 1.6}, a);
  CHECK(colinear.value == doctest::Approx(-1.0).epsilon(1e-15));
  for (double g : colinear.grad) CHECK(std::abs(g) < 1e-15);
  CHECK(std::abs(anchor_loss(std::vector<double>{-0.8, 0.6}, a).value) < 1e-15);
  CHECK(anchor_loss(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 0.0}).value ==
        doctest::Approx(-std::sqrt(2.0) / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(anchor_loss(std::vector<double>{0.0, 0.0}, a), NumericError);
  CHECK_THROWS_AS(anchor_loss(std::vector<double>{1e-13, 0.0}, a), NumericError);
}

TEST_CASE("anchor_loss gradient, bound and scale invariance") {
  RngStream rng(21, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t dim = 2 + rng.uniform_index(31);
    const auto a = random_unit(rng, dim);
    std::vector<double> v(dim);
    const double scale = std::exp(4.0 * rng.uniform() - 2.0);
    for (auto& x : v) x = scale * rng.gaussian();
    const auto loss = anchor_loss(v, a);
    CHECK(loss.value >= -1.0 - 1e-15);
    CHECK(loss.value <= 1.0 + 1e-15);
    CHECK(norm(loss.grad) <= 1.0 / norm(v) + 1e-9);
    const auto numeric = finite_diff_grad([&](std::span<const double> p) { return anchor_loss(p, a).value; }, v, 1e-5);
    CHECK(max_relative_error(loss.grad, numeric) < 1e-5);

    const double k = std::exp(6.0 * rng.uniform() - 3.0);
    std::vector<double> kv(v);
    for (auto& x : kv) x *= k;
    CHECK(std::abs(anchor_loss(kv, a).value - loss.value) < 1e-12);
  }
}

TEST_CASE("squared_distance_loss") {
  const std::vector<double> a{1.0, 0.0};
  const auto at_min = squared_distance_loss(a, a);
  CHECK(at_min.value == 0.0);
  for (double g : at_min.grad) CHECK(g == 0.0);
  CHECK(squared_distance_loss(std::vector<double>{1.0, 1.0}, a).value == 1.0);
  RngStream rng(3, 3);
  std::vector<double> v{0.3, -2.0};
  const auto numeric = finite_diff_grad([&](std::span<const double> p) { return squared_distance_loss(p, a).value; }, v, 1e-5);
  CHECK(max_relative_error(squared_distance_loss(v, a).grad, numeric) < 1e-8);
}

TEST_CASE("compute_weights examples") {
  for (double w : compute_weights(std::vector<double>{-0.9, 0.2, 0.7}, 0.0)) CHECK(w == doctest::Approx(1.0 / 3.0));
  for (double w : compute_weights(std::vector<double>{0.4, 0.4, 0.4, 0.4}, 10.0)) CHECK(w == 0.25);
  const auto w = compute_weights(std::vector<double>{-1.0, 0.0}, std::log(3.0));
  CHECK(w[0] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_THROWS_AS(compute_weights(std::vector<double>{}, 1.0), InputError);
}

TEST_CASE("compute_weights normalization and monotonicity") {
  RngStream rng(4, 4);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> costs(1 + rng.uniform_index(64));
    for (auto& c : costs) c = 2.0 * rng.uniform() - 1.0;
    const double tau = 25.0 * rng.uniform();
    const auto w = compute_weights(costs, tau);
    double sum = 0.0;
    for (double x : w) {
      CHECK(x > 0.0);
      sum += x;
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);

    if (costs.size() > 1 && tau > 0.0) {
      const std::size_t i = rng.uniform_index(costs.size());
      auto lowered = costs;
      lowered[i] -= 0.05;
      CHECK(compute_weights(lowered, tau)[i] > w[i]);
    }
  }
}

TEST_CASE("softmax weights concentrate on well-aligned samples") {
  RngStream rng(5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 8 + rng.uniform_index(56);
    const std::size_t corrupt = 1 + rng.uniform_index(n - 1);
    const double alpha = static_cast<double>(corrupt) / static_cast<double>(n);
    const double delta = 0.01 + 0.5 * rng.uniform();
    // Clean similarities in [0.2, 0.6]; corrupted ones at least delta below.
    std::vector<double> costs(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double sim = i < corrupt ? 0.2 - delta - 0.3 * rng.uniform() : 0.2 + 0.4 * rng.uniform();
      costs[i] = -sim;
    }
    double prev = 2.0;
    for (double tau : {0.0, 1.0, 5.0, 10.0, 20.0}) {
      const auto w = compute_weights(costs, tau);
      double mass = 0.0;
      for (std::size_t i = 0; i < corrupt; ++i) mass += w[i];
      CHECK(mass <= alpha / (alpha + (1 - alpha) * std::exp(tau * delta)) + 1e-12);
      CHECK(mass < prev);
      prev = mass;
    }
  }
}

TEST_CASE("cross entropy and warm-up loss") {
  Matrix uniform(3, 4);
  const std::vector<std::size_t> labels{0, 3, 2};
  const auto flat = warmup_loss(uniform, labels);
  for (double l : flat.per_sample) CHECK(l == doctest::Approx(std::log(4.0)).epsilon(1e-14));
  CHECK(flat.value == doctest::Approx(3.0 * std::log(4.0)));
  CHECK(warmup_loss(uniform, labels, true).value == doctest::Approx(std::log(4.0)));

  double previous = INFINITY;
  for (double margin : {1.0, 5.0, 20.0, 60.0}) {
    const double l = cross_entropy(std::vector<double>{margin, 0.0, 0.0}, 0).value;
    CHECK(l < previous);
    previous = l;
  }
  CHECK(previous < 1e-20);

  // -ln(e / (e + 1)) = ln(1 + e^-1)
  CHECK(cross_entropy(std::vector<double>{1.0, 0.0}, 0).value == doctest::Approx(0.31326168751822).epsilon(1e-13));
  CHECK_THROWS_AS(cross_entropy(std::vector<double>{1.0, 0.0}, 2), InputError);

  const std::vector<double> logits{0.3, -1.2, 2.0};
  const auto numeric =
      finite_diff_grad([](std::span<const double> p) { return cross_entropy(p, 1).value; }, logits, 1e-5);
  CHECK(max_relative_error(cross_entropy(logits, 1).grad, numeric) < 1e-8);
}

TEST_CASE("total_loss reductions") {
  RngStream rng(6, 6);
  const ModelDims dims{5, 6, 4, 3, 4};
  const auto params = random_net(30, dims);
  const auto anchors = random_anchors(rng, 3, 4);
  const auto batch = random_batch(rng, 7, 5, 3);

  const auto erm = total_loss(batch, params, anchors, ObjectiveConfig{0.0, 0.0});
  double mean_ce = 0.0;
  for (double c : erm.cross_entropy) mean_ce += c / 7.0;
  CHECK(erm.total == doctest::Approx(mean_ce).epsilon(1e-14));
  for (double w : erm.weights) CHECK(w == 1.0 / 7.0);

  const std::vector<Sample> one(batch.begin(), batch.begin() + 1);
  const auto single = total_loss(one, params, anchors, ObjectiveConfig{0.3, 10.0});
  CHECK(single.weights[0] == 1.0);
  CHECK(single.total == doctest::Approx(0.3 * single.alignment[0] + single.cross_entropy[0]).epsilon(1e-14));

  const auto uniform = total_loss(batch, params, anchors, ObjectiveConfig{0.1, 10.0, AlignmentKind::cosine, true, true});
  for (double w : uniform.weights) CHECK(w == 1.0 / 7.0);

  CHECK_THROWS_AS(total_loss({}, params, anchors, ObjectiveConfig{}), InputError);
  CHECK_THROWS_AS(total_loss(batch, params, anchors, ObjectiveConfig{-1.0, 1.0}), InputError);
}

TEST_CASE("total_loss hand evaluation") {
  // Identity featurizer on positive inputs; anchors e0, e1; both samples labeled 0.
  const double p = -std::log(std::exp(0.2) - 1.0);  // CE 0.2 for logits (p, 0)
  const double q = std::log(std::exp(0.9) - 1.0);   // CE 0.9 for logits (-q, 0)
  ModelParams net;
  net.hidden = Linear{Matrix::identity(2), {0.0, 0.0}};
  net.feature = Linear{Matrix::identity(2), {0.0, 0.0}};
  net.classifier = Linear{Matrix::from_rows({{1.0, -1.0}, {0.0, 0.0}}), {0.0, 0.0}};
  net.projectors = {Linear{Matrix::identity(2), {0.0, 0.0}}, Linear{Matrix::identity(2), {0.0, 0.0}}};
  const AnchorSet anchors({"a", "b"}, Matrix::identity(2));
  const std::vector<Sample> batch{Sample{{p, 0.0}, 0, 0, 0, false}, Sample{{0.0, q}, 0, 0, 0, false}};

  const auto out = total_loss(batch, net, anchors, ObjectiveConfig{0.1, std::log(3.0)});
  CHECK(out.alignment[0] == doctest::Approx(-1.0));
  CHECK(std::abs(out.alignment[1]) < 1e-15);
  CHECK(out.cross_entropy[0] == doctest::Approx(0.2).epsilon(1e-13));
  CHECK(out.cross_entropy[1] == doctest::Approx(0.9).epsilon(1e-13));
  CHECK(out.weights[0] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(out.total == doctest::Approx(0.3).epsilon(1e-13));
}

TEST_CASE("total_loss gradients match finite differences") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RngStream rng(seed, 7);
    const ModelDims dims{4, 5, 3 + seed % 2, 3, 3};
    const auto params = random_net(40 + seed, dims);
    const auto anchors = random_anchors(rng, 3, 3);
    const auto batch = random_batch(rng, 6, 4, 3);
    for (bool stop_grad : {true, false}) {
      ObjectiveConfig cfg{0.1 + rng.uniform(), 5.0 * rng.uniform(), AlignmentKind::cosine, stop_grad};
      const auto out = total_loss(batch, params, anchors, cfg);
      CHECK(std::abs(out.weight_sum() - 1.0) < 1e-12);
      CHECK(out.total == doctest::Approx(frozen_total(batch, params, anchors, cfg.lambda, cfg.tau, {})).epsilon(1e-12));
      const std::vector<double> frozen = stop_grad ? out.weights : std::vector<double>{};
      ModelParams probe = params;
      const auto numeric = finite_diff_grad(
          [&](std::span<const double> flat) {
            unflatten(probe, flat);
            return frozen_total(batch, probe, anchors, cfg.lambda, cfg.tau, frozen);
          },
          flatten(params), 1e-5);
      CHECK(max_relative_error(flatten(out.grad), numeric) < 1e-4);
    }
  }
}

TEST_CASE("alignment terms are invariant to rescaling the projected features") {
  RngStream rng(8, 8);
  const ModelDims dims{5, 6, 4, 3, 4};
  const auto params = random_net(50, dims);
  const auto anchors = random_anchors(rng, 3, 4);
  const auto batch = random_batch(rng, 9, 5, 3);
  const auto base = total_loss(batch, params, anchors, ObjectiveConfig{0.1, 10.0});
  for (double k : {0.01, 0.5, 3.0, 1e3}) {
    auto scaled = params;
    for (auto& proj : scaled.projectors) {
      for (auto& w : proj.weight.values()) w *= k;
      for (auto& b : proj.bias) b *= k;
    }
    const auto out = total_loss(batch, scaled, anchors, ObjectiveConfig{0.1, 10.0});
    for (std::size_t i = 0; i < batch.size(); ++i) {
      CHECK(std::abs(out.alignment[i] - base.alignment[i]) < 1e-12);
      CHECK(std::abs(out.weights[i] - base.weights[i]) < 1e-12);
    }
    CHECK(std::abs(out.total - base.total) < 1e-12);
  }
}

TEST_CASE("degenerate projection names the sample") {
  RngStream rng(9, 9);
  const ModelDims dims{5, 6, 4, 3, 4};
  auto params = random_net(60, dims);
  params.projectors[2] = Linear{Matrix(4, 4), {0.0, 0.0, 0.0, 0.0}};
  const auto anchors = random_anchors(rng, 3, 4);
  auto batch = random_batch(rng, 5, 5, 3);
  for (auto& s : batch) s.observed_label = 0;
  batch[3].observed_label = 2;
  try {
    total_loss(batch, params, anchors, ObjectiveConfig{});
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    REQUIRE(e.index().has_value());
    CHECK(*e.index() == 3);
  }
}

TEST_CASE("squared-distance alignment variant") {
  RngStream rng(10, 10);
  const ModelDims dims{4, 5, 3, 3, 3};
  const auto params = random_net(70, dims);
  const auto anchors = random_anchors(rng, 3, 3);
  const auto batch = random_batch(rng, 5, 4, 3);
  const auto out = total_loss(batch, params, anchors, ObjectiveConfig{0.2, 1.0, AlignmentKind::squared_distance});
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto v = project(params, batch[i].observed_label, forward(params, batch[i].x).features);
    CHECK(out.alignment[i] == doctest::Approx(squared_distance_loss(v, anchors.anchor(batch[i].observed_label)).value));
  }
  CHECK(std::abs(out.weight_sum() - 1.0) < 1e-12);
}

TEST_CASE("warm-up batch gradients") {
  RngStream rng(11, 11);
  const ModelDims dims{4, 5, 3, 3, 3};
  const auto params = random_net(80, dims);
  const auto batch = random_batch(rng, 6, 4, 3);
  for (bool mean : {false, true}) {
    const auto out = warmup_batch_loss(batch, params, mean);
    for (const auto& proj : out.grad.projectors) {
      for (double v : proj.weight.values()) CHECK(v == 0.0);
    }
    ModelParams probe = params;
    const auto numeric = finite_diff_grad(
        [&](std::span<const double> flat) {
          unflatten(probe, flat);
          return warmup_batch_loss(batch, probe, mean).total;
        },
        flatten(params), 1e-5);
    CHECK(max_relative_error(flatten(out.grad), numeric) < 1e-4);
  }
}
