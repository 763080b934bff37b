#pragma once

#include <cstdint>
#include <optional>

#include "a3w/datagen/dataset.hpp"

namespace a3w {

// Symmetric label noise: with probability p the label moves to one of the
// other C-1 classes, chosen uniformly.
struct NoiseModel {
  double p = 0.0;
};

// Samples in target_domain keep clean labels. Each sample draws from its own
// substream, so the outcome does not depend on iteration order.
MultiDomainDataset inject_symmetric_noise(const MultiDomainDataset& ds, const NoiseModel& model,
                                          std::uint64_t seed, std::optional<std::size_t> target_domain);

std::size_t count_corrupted(const MultiDomainDataset& ds);

}  // namespace a3w
