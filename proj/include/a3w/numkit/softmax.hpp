#pragma once

#include <span>
#include <vector>

namespace a3w {

// exp(t*v_i - max_j t*v_j) / sum_k exp(t*v_k - max_j t*v_j).
// Throws DomainError on empty input, negative or non-finite t, or non-finite v.
std::vector<double> stable_softmax(std::span<const double> v, double t);

}  // namespace a3w
