#include "a3w/numkit/softmax.hpp"

#include <algorithm>
#include <cmath>

#include "a3w/error.hpp"

namespace a3w {

std::vector<double> stable_softmax(std::span<const double> v, double t) {
  if (v.empty()) throw DomainError("softmax of an empty vector");
  if (!std::isfinite(t) || t < 0.0) throw DomainError("softmax temperature must be finite and >= 0");
  std::vector<double> out(v.size());
  double peak = -INFINITY;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw DomainError("softmax input is not finite");
    out[i] = t * v[i];
    peak = std::max(peak, out[i]);
  }
  double total = 0.0;
  for (auto& e : out) {
    e = std::exp(e - peak);
    total += e;
  }
  for (auto& e : out) e /= total;
  return out;
}

}  // namespace a3w
