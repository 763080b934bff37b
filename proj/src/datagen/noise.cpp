#include "a3w/datagen/noise.hpp"

#include <algorithm>
#include <cmath>

#include "a3w/error.hpp"
#include "a3w/numkit/rng.hpp"

namespace a3w {

MultiDomainDataset inject_symmetric_noise(const MultiDomainDataset& ds, const NoiseModel& model,
                                          std::uint64_t seed, std::optional<std::size_t> target_domain) {
  if (!(model.p >= 0.0 && model.p <= 1.0)) throw InputError("noise probability must lie in [0, 1]");
  MultiDomainDataset out = ds;
  const RngStream root(seed, streams::noise);
  const std::size_t others = ds.num_classes - 1;
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    Sample& s = out.samples[i];
    s.observed_label = s.true_label;
    s.corrupted = false;
    if (target_domain && s.domain == *target_domain) continue;
    RngStream rng = root.substream(i);
    if (!rng.bernoulli(model.p)) continue;
    const auto k = static_cast<std::size_t>(rng.uniform_index(others));
    s.observed_label = k < s.true_label ? k : k + 1;
    s.corrupted = true;
  }
  return out;
}

std::size_t count_corrupted(const MultiDomainDataset& ds) {
  return static_cast<std::size_t>(
      std::count_if(ds.samples.begin(), ds.samples.end(), [](const Sample& s) { return s.corrupted; }));
}

}  // namespace a3w
