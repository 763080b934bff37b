#pragma once

#include <cstdint>
#include <vector>

#include "a3w/datagen/dataset.hpp"
#include "a3w/numkit/rng.hpp"

namespace a3w {

struct DomainSplit {
  std::size_t target_domain = 0;
  std::size_t num_classes = 0;
  std::size_t feature_dim = 0;
  std::vector<Sample> train;       // all source domains pooled
  std::vector<Sample> validation;  // 20% of the target domain
  std::vector<Sample> test;        // remaining 80%
};

inline constexpr double kValidationFraction = 0.2;

DomainSplit leave_one_out_split(const MultiDomainDataset& ds, std::size_t target_domain, std::uint64_t seed);

// n draws, uniform with replacement over the pooled training set.
std::vector<Sample> sample_batch(const std::vector<Sample>& train, std::size_t n, RngStream& rng);

}  // namespace a3w
