#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "a3w/model/ema.hpp"
#include "a3w/model/params.hpp"

namespace a3w {

// Text checkpoint, version 1:
//   a3w-checkpoint 1
//   dims <input> <hidden> <feature> <classes> <anchor_dim>
//   section params                    (then, if present: section ema <count>)
//   tensor <name> <rows> <cols>
//   <rows*cols values, shortest round-trip decimal, space separated>
//   ...
// Tensors appear in for_each_tensor order; biases are stored as 1 x n.
struct Checkpoint {
  ModelParams params;
  std::optional<EmaState> ema;
};

void write_checkpoint(const Checkpoint& ckpt, std::ostream& out);
void write_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint read_checkpoint(std::istream& in);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace a3w
