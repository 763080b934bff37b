#pragma once

#include <filesystem>
#include <iosfwd>

#include "a3w/datagen/dataset.hpp"

namespace a3w {

// Externally extracted features. Layout mirrors the anchor file:
//   N k
//   id,v1,...,vk,label,domain     (N rows; commas or whitespace separate)
// Class and domain counts are inferred; the coverage invariant is enforced.
MultiDomainDataset parse_feature_text(std::istream& in);
MultiDomainDataset read_feature_file(const std::filesystem::path& path);

void write_feature_text(const MultiDomainDataset& ds, std::ostream& out);
void write_feature_file(const MultiDomainDataset& ds, const std::filesystem::path& path);

}  // namespace a3w
