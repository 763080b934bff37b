#include "a3w/model/ema.hpp"

#include <vector>

#include "a3w/error.hpp"
#include "a3w/model/network.hpp"

namespace a3w {

void ema_update_in_place(EmaState& state, const ModelParams& current) {
  if (state.shadow.parameter_count() != current.parameter_count() || state.shadow.dims() != current.dims()) {
    throw ShapeError("EMA shadow and current parameters have different shapes");
  }
  std::vector<std::span<const double>> cur;
  for_each_tensor(current, [&](const std::string&, Partition, std::span<const double> t) { cur.push_back(t); });
  const double count = static_cast<double>(state.count);
  std::size_t i = 0;
  for_each_tensor(state.shadow, [&](const std::string& name, Partition, std::span<double> t) {
    const auto c = cur[i++];
    if (c.size() != t.size()) throw ShapeError("EMA shape mismatch for " + name);
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = (t[j] * count + c[j]) / (count + 1.0);
  });
  ++state.count;
}

EmaState ema_update(EmaState state, const ModelParams& current) {
  ema_update_in_place(state, current);
  return state;
}

std::size_t predict(const ModelParams& params, std::span<const double> x) {
  return argmax(forward(params, x).logits);
}

std::size_t predict(const EmaState& ema, std::span<const double> x) { return predict(ema.shadow, x); }

}  // namespace a3w
