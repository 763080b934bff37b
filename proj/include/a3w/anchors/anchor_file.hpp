#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "a3w/anchors/anchor_set.hpp"

namespace a3w {

// Text format:
//   C m
//   name v1 v2 ... vm      (C lines, single-space separated, no spaces in name)
struct LoadedAnchors {
  AnchorSet anchors;
  std::vector<std::string> warnings;
};

// Rows more than 1e-6 off unit norm are re-normalized and reported in warnings.
LoadedAnchors parse_anchor_text(std::istream& in);
LoadedAnchors read_anchor_file(const std::filesystem::path& path);

void write_anchor_text(const AnchorSet& set, std::ostream& out);
void write_anchor_file(const AnchorSet& set, const std::filesystem::path& path);

}  // namespace a3w
