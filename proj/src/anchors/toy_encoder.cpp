#include "a3w/anchors/toy_encoder.hpp"

#include <cctype>
#include <cmath>

#include "a3w/error.hpp"
#include "a3w/numkit/rng.hpp"
#include "a3w/numkit/softmax.hpp"
#include "a3w/numkit/text.hpp"
#include "a3w/simd/kernels.hpp"

namespace a3w {
namespace {

Matrix gaussian_matrix(RngStream& rng, std::size_t rows, std::size_t cols, double scale) {
  Matrix m(rows, cols);
  for (auto& x : m.values()) x = scale * rng.gaussian();
  return m;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Parameter-free layer norm.
std::vector<double> layer_norm(std::span<const double> x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(x.size());
  const double inv = 1.0 / std::sqrt(var + 1e-5);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - mean) * inv;
  return out;
}

std::vector<double> apply(const Matrix& w, std::span<const double> x) {
  std::vector<double> y(w.rows());
  simd::active().gemv(w.data(), w.rows(), w.cols(), x.data(), nullptr, y.data());
  return y;
}

}  // namespace

ToyEncoderParams make_toy_encoder(std::uint64_t seed, std::size_t dim, std::size_t vocab_size,
                                  std::size_t max_len, std::size_t ff_dim) {
  if (dim == 0 || max_len < 2 || ff_dim == 0) throw InputError("toy encoder dimensions must be positive");
  if (vocab_size <= 257) throw InputError("toy encoder vocabulary must exceed the 257 reserved ids");
  ToyEncoderParams p;
  p.seed = seed;
  p.vocab_size = vocab_size;
  p.dim = dim;
  p.max_len = max_len;
  p.ff_dim = ff_dim;
  RngStream rng(seed, streams::encoder);
  const double inv_dim = 1.0 / std::sqrt(static_cast<double>(dim));
  p.token_embedding = gaussian_matrix(rng, vocab_size, dim, 1.0);
  p.positional = gaussian_matrix(rng, max_len, dim, 0.5);
  p.w_query = gaussian_matrix(rng, dim, dim, inv_dim);
  p.w_key = gaussian_matrix(rng, dim, dim, inv_dim);
  p.w_value = gaussian_matrix(rng, dim, dim, inv_dim);
  p.w_out = gaussian_matrix(rng, dim, dim, inv_dim);
  p.ff_in = gaussian_matrix(rng, ff_dim, dim, inv_dim);
  p.ff_out = gaussian_matrix(rng, dim, ff_dim, 1.0 / std::sqrt(static_cast<double>(ff_dim)));
  p.w_proj = gaussian_matrix(rng, dim, dim, inv_dim);
  return p;
}

std::vector<std::size_t> tokenize(std::string_view prompt, std::size_t vocab_size) {
  std::vector<std::size_t> ids;
  for (auto word : split_tokens(prompt, " \t\r\n")) {
    std::string lower(word);
    for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower.size() == 1) {
      ids.push_back(1 + static_cast<unsigned char>(lower[0]));
    } else {
      ids.push_back(257 + fnv1a(lower) % (vocab_size - 257));
    }
  }
  ids.push_back(kEndToken);
  return ids;
}

std::vector<double> toy_text_encode(const ToyEncoderParams& p, std::string_view prompt) {
  const auto ids = tokenize(prompt, p.vocab_size);
  if (ids.size() > p.max_len) {
    throw InputError("prompt has " + std::to_string(ids.size()) + " tokens; limit is " + std::to_string(p.max_len));
  }
  const std::size_t len = ids.size();
  const std::size_t m = p.dim;

  // Token embedding plus positional encoding.
  Matrix x(len, m);
  for (std::size_t i = 0; i < len; ++i) {
    auto row = x.row(i);
    const auto e = p.token_embedding.row(ids[i]);
    const auto pos = p.positional.row(i);
    for (std::size_t j = 0; j < m; ++j) row[j] = e[j] + pos[j];
  }

  // Single-head self-attention with pre-norm and a residual connection.
  Matrix q(len, m), k(len, m), v(len, m);
  for (std::size_t i = 0; i < len; ++i) {
    const auto normed = layer_norm(x.row(i));
    const auto qi = apply(p.w_query, normed), ki = apply(p.w_key, normed), vi = apply(p.w_value, normed);
    std::copy(qi.begin(), qi.end(), q.row(i).begin());
    std::copy(ki.begin(), ki.end(), k.row(i).begin());
    std::copy(vi.begin(), vi.end(), v.row(i).begin());
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  Matrix attended(len, m);
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<double> scores(len);
    for (std::size_t j = 0; j < len; ++j) scores[j] = simd::dot(q.row(i), k.row(j)) * scale;
    const auto weights = stable_softmax(scores, 1.0);
    std::vector<double> mix(m, 0.0);
    for (std::size_t j = 0; j < len; ++j) simd::axpy(weights[j], v.row(j), mix);
    const auto out = apply(p.w_out, mix);
    auto row = attended.row(i);
    for (std::size_t j = 0; j < m; ++j) row[j] = x(i, j) + out[j];
  }

  // Only the end token's contextual vector feeds the pooled output, so the
  // feed-forward sublayer is evaluated for that position alone.
  const auto end_row = attended.row(len - 1);
  auto hidden = apply(p.ff_in, layer_norm(end_row));
  for (auto& h : hidden) h = std::max(h, 0.0);
  const auto ff = apply(p.ff_out, hidden);
  std::vector<double> pooled(m);
  for (std::size_t j = 0; j < m; ++j) pooled[j] = end_row[j] + ff[j];

  return apply(p.w_proj, layer_norm(pooled));
}

AnchorSet toy_anchors(const ToyEncoderParams& params, const std::vector<std::string>& class_names) {
  Matrix raw(class_names.size(), params.dim);
  for (std::size_t c = 0; c < class_names.size(); ++c) {
    std::string spoken = class_names[c];
    for (auto& ch : spoken) {
      if (ch == '_') ch = ' ';
    }
    const auto a = toy_text_encode(params, build_prompt(spoken));
    std::copy(a.begin(), a.end(), raw.row(c).begin());
  }
  return AnchorSet::from_unnormalized(class_names, std::move(raw));
}

}  // namespace a3w
