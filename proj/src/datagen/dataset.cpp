#include "a3w/datagen/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "a3w/error.hpp"
#include "a3w/numkit/rng.hpp"
#include "a3w/simd/kernels.hpp"

namespace a3w {

void GeneratorSpec::validate() const {
  if (num_classes < 2) throw InputError("generator needs at least 2 classes");
  if (num_domains < 2) throw InputError("generator needs at least 2 domains (source and target)");
  if (per_class_per_domain < 1) throw InputError("samples per class per domain must be >= 1");
  if (invariant_dim < 1) throw InputError("invariant feature dimension must be >= 1");
  if (rho.size() != num_domains) {
    throw InputError("rho has " + std::to_string(rho.size()) + " entries for " + std::to_string(num_domains) +
                     " domains");
  }
  for (double r : rho) {
    if (!(r >= -1.0 && r <= 1.0)) throw InputError("rho values must lie in [-1, 1]");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InputError("sigma must be finite and >= 0");
  if (!std::isfinite(prototype_scale) || !std::isfinite(spurious_scale) || !std::isfinite(domain_shift)) {
    throw InputError("generator scales must be finite");
  }
}

std::size_t MultiDomainDataset::domain_size(std::size_t d) const {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [d](const Sample& s) { return s.domain == d; }));
}

void MultiDomainDataset::validate() const {
  if (num_classes < 2) throw InputError("dataset needs at least 2 classes");
  if (num_domains < 1) throw InputError("dataset needs at least 1 domain");
  std::vector<std::size_t> seen(num_classes * num_domains, 0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.x.size() != feature_dim) throw ShapeError("sample " + std::to_string(i) + " has wrong feature dimension");
    if (s.true_label >= num_classes || s.observed_label >= num_classes) {
      throw InputError("sample " + std::to_string(i) + " has a label out of range");
    }
    if (s.domain >= num_domains) throw InputError("sample " + std::to_string(i) + " has a domain out of range");
    if (s.corrupted != (s.true_label != s.observed_label)) {
      throw StateError("sample " + std::to_string(i) + " corruption flag disagrees with its labels");
    }
    ++seen[s.domain * num_classes + s.true_label];
  }
  for (std::size_t d = 0; d < num_domains; ++d) {
    for (std::size_t c = 0; c < num_classes; ++c) {
      if (seen[d * num_classes + c] == 0) {
        throw InputError("domain " + std::to_string(d) + " has no sample of class " + std::to_string(c));
      }
    }
  }
}

std::vector<double> rho_for_target(std::size_t num_domains, std::size_t target,
                                   const std::vector<double>& source_rho, double target_rho) {
  if (target >= num_domains) throw InputError("target domain out of range");
  if (source_rho.empty()) throw InputError("source rho list is empty");
  std::vector<double> rho(num_domains);
  std::size_t next = 0;
  for (std::size_t d = 0; d < num_domains; ++d) {
    // Cycle the list if there are more sources than values.
    rho[d] = d == target ? target_rho : source_rho[next++ % source_rho.size()];
  }
  return rho;
}

MultiDomainDataset make_domains(const GeneratorSpec& spec, std::uint64_t seed) {
  spec.validate();
  const std::size_t k_inv = spec.invariant_dim;
  const std::size_t k_sp = spec.spurious_dim;
  const RngStream root(seed, streams::data_gen);

  GeneratorParams gen;
  {
    RngStream rng = root.substream(1);
    gen.prototypes = Matrix(spec.num_classes, k_inv);
    for (auto& v : gen.prototypes.values()) v = spec.prototype_scale * rng.gaussian();
    const double shift = spec.domain_shift / std::sqrt(static_cast<double>(k_inv));
    for (std::size_t d = 0; d < spec.num_domains; ++d) {
      Matrix a = Matrix::identity(k_inv);
      for (auto& v : a.values()) v += shift * rng.gaussian();
      gen.transforms.push_back(std::move(a));
    }
    gen.spurious = Matrix(spec.num_classes, k_sp);
    for (auto& v : gen.spurious.values()) v = spec.spurious_scale * rng.gaussian();
  }

  MultiDomainDataset ds;
  ds.num_classes = spec.num_classes;
  ds.num_domains = spec.num_domains;
  ds.feature_dim = k_inv + k_sp;
  ds.samples.reserve(spec.num_classes * spec.num_domains * spec.per_class_per_domain);

  RngStream rng = root.substream(2);
  std::vector<double> latent(k_inv);
  for (std::size_t d = 0; d < spec.num_domains; ++d) {
    const double match_prob = std::max(0.0, spec.rho[d]);
    const Matrix& a = gen.transforms[d];
    for (std::size_t c = 0; c < spec.num_classes; ++c) {
      for (std::size_t n = 0; n < spec.per_class_per_domain; ++n) {
        Sample s;
        s.true_label = s.observed_label = c;
        s.domain = d;
        s.x.resize(k_inv + k_sp);
        const auto mu = gen.prototypes.row(c);
        for (std::size_t j = 0; j < k_inv; ++j) latent[j] = mu[j] + spec.sigma * rng.gaussian();
        simd::active().gemv(a.data(), k_inv, k_inv, latent.data(), nullptr, s.x.data());
        std::size_t spurious_class = c;
        if (!rng.bernoulli(match_prob)) {
          const auto k = static_cast<std::size_t>(rng.uniform_index(spec.num_classes - 1));
          spurious_class = k < c ? k : k + 1;
        }
        const auto nu = gen.spurious.row(spurious_class);
        std::copy(nu.begin(), nu.end(), s.x.begin() + static_cast<std::ptrdiff_t>(k_inv));
        ds.samples.push_back(std::move(s));
      }
    }
  }
  ds.generator = std::move(gen);
  ds.validate();
  return ds;
}

}  // namespace a3w
