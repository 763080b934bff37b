#pragma once

#include <span>

#include "a3w/model/params.hpp"

namespace a3w {

// Running arithmetic mean of parameter snapshots. Starts as a copy of the
// initial parameters with count 1.
struct EmaState {
  ModelParams shadow;
  std::size_t count = 1;

  static EmaState start(const ModelParams& initial) { return EmaState{initial, 1}; }
};

// shadow <- (shadow * count + current) / (count + 1); count <- count + 1.
EmaState ema_update(EmaState state, const ModelParams& current);
void ema_update_in_place(EmaState& state, const ModelParams& current);

std::size_t predict(const EmaState& ema, std::span<const double> x);
std::size_t predict(const ModelParams& params, std::span<const double> x);

}  // namespace a3w
