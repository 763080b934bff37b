#pragma once

#include <functional>
#include <span>
#include <vector>

namespace a3w {

using ScalarFn = std::function<double(std::span<const double>)>;

// Central differences per coordinate. Throws NumericError naming the
// coordinate whose perturbed evaluation was not finite.
std::vector<double> finite_diff_grad(const ScalarFn& fn, std::span<const double> x, double h);

// Max over coordinates of |a - n| / max(floor, |a|, |n|).
double max_relative_error(std::span<const double> analytic, std::span<const double> numeric,
                          double floor = 1e-6);

}  // namespace a3w
