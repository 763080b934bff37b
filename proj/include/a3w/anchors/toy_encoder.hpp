#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "a3w/anchors/anchor_set.hpp"
#include "a3w/numkit/matrix.hpp"

namespace a3w {

// Randomly initialized single-block text transformer. It is not pretrained;
// it exists to run the prompt -> tokens -> embeddings -> attention -> pooled
// projection pipeline end to end.
struct ToyEncoderParams {
  std::uint64_t seed = 0;
  std::size_t vocab_size = 1024;
  std::size_t dim = 32;
  std::size_t max_len = 16;
  std::size_t ff_dim = 64;

  Matrix token_embedding;  // vocab_size x dim
  Matrix positional;       // max_len x dim
  Matrix w_query;          // dim x dim
  Matrix w_key;
  Matrix w_value;
  Matrix w_out;
  Matrix ff_in;   // ff_dim x dim
  Matrix ff_out;  // dim x ff_dim
  Matrix w_proj;  // dim x dim
};

ToyEncoderParams make_toy_encoder(std::uint64_t seed, std::size_t dim = 32, std::size_t vocab_size = 1024,
                                  std::size_t max_len = 16, std::size_t ff_dim = 64);

inline constexpr std::size_t kEndToken = 0;

// Lowercases, splits on whitespace, maps one-byte words to byte ids 1..256
// and hashes longer words into [257, vocab). Appends the end token.
std::vector<std::size_t> tokenize(std::string_view prompt, std::size_t vocab_size);

// Unnormalized embedding of the end token after one transformer block and
// the output projection.
std::vector<double> toy_text_encode(const ToyEncoderParams& params, std::string_view prompt);

// Encodes build_prompt(name) for every class (underscores read as spaces).
AnchorSet toy_anchors(const ToyEncoderParams& params, const std::vector<std::string>& class_names);

}  // namespace a3w
