#include "a3w/datagen/split.hpp"

#include <string>
#include <utility>

#include "a3w/error.hpp"

namespace a3w {

DomainSplit leave_one_out_split(const MultiDomainDataset& ds, std::size_t target_domain, std::uint64_t seed) {
  if (target_domain >= ds.num_domains) {
    throw InputError("target domain " + std::to_string(target_domain) + " out of range [0, " +
                     std::to_string(ds.num_domains) + ")");
  }
  DomainSplit split;
  split.target_domain = target_domain;
  split.num_classes = ds.num_classes;
  split.feature_dim = ds.feature_dim;
  std::vector<Sample> target;
  for (const auto& s : ds.samples) (s.domain == target_domain ? target : split.train).push_back(s);

  RngStream rng(seed, streams::split, target_domain);
  for (std::size_t i = target.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_index(i));
    std::swap(target[i - 1], target[j]);
  }
  std::size_t n_val = target.size() / 5;
  if (n_val == 0 && target.size() >= 2) n_val = 1;
  split.validation.assign(target.begin(), target.begin() + static_cast<std::ptrdiff_t>(n_val));
  split.test.assign(target.begin() + static_cast<std::ptrdiff_t>(n_val), target.end());
  return split;
}

std::vector<Sample> sample_batch(const std::vector<Sample>& train, std::size_t n, RngStream& rng) {
  if (train.empty()) throw StateError("cannot sample a batch from an empty training set");
  if (n == 0) throw InputError("batch size must be >= 1");
  std::vector<Sample> batch;
  batch.reserve(n);
  for (std::size_t i = 0; i < n; ++i) batch.push_back(train[rng.uniform_index(train.size())]);
  return batch;
}

}  // namespace a3w
