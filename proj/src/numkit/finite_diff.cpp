#include "a3w/numkit/finite_diff.hpp"

#include <algorithm>
#include <cmath>

#include "a3w/error.hpp"

namespace a3w {

std::vector<double> finite_diff_grad(const ScalarFn& fn, std::span<const double> x, double h) {
  if (!(h > 0.0)) throw DomainError("finite difference step must be > 0");
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = probe[i];
    probe[i] = orig + h;
    const double up = fn(probe);
    probe[i] = orig - h;
    const double down = fn(probe);
    probe[i] = orig;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw NumericError("non-finite function value in finite difference", i);
    }
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

double max_relative_error(std::span<const double> analytic, std::span<const double> numeric,
                          double floor) {
  if (analytic.size() != numeric.size()) throw ShapeError("gradient length mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double scale = std::max({floor, std::abs(analytic[i]), std::abs(numeric[i])});
    worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / scale);
  }
  return worst;
}

}  // namespace a3w
