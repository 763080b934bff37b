#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace a3w {

// Counter-based generator (Philox4x32-10). Every output is a pure function of
// (seed, stream_id, counter), so draws can be addressed directly and streams
// split without coordination.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t counter = 0)
      : seed_(seed), stream_id_(stream_id), counter_(counter) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t counter() const { return counter_; }

  // Raw 128-bit block at an arbitrary counter; does not advance.
  std::array<std::uint32_t, 4> block(std::uint64_t counter) const;

  std::uint64_t next_u64();
  // Uniform on [0, 1).
  double uniform();
  // Uniform on {0, ..., n-1}; n must be >= 1.
  std::uint64_t uniform_index(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }
  // Box-Muller on one block; consumes exactly one counter value.
  double gaussian();

  RngStream substream(std::uint64_t tag) const;

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_;
};

// Fixed stream ids for the different consumers of randomness.
namespace streams {
inline constexpr std::uint64_t data_gen = 0x100;
inline constexpr std::uint64_t noise = 0x200;
inline constexpr std::uint64_t split = 0x300;
inline constexpr std::uint64_t batches = 0x400;
inline constexpr std::uint64_t model_init = 0x500;
inline constexpr std::uint64_t encoder = 0x600;
inline constexpr std::uint64_t oracle_map = 0x700;
inline constexpr std::uint64_t checks = 0x800;
}  // namespace streams

std::vector<double> rng_gaussian(RngStream& stream, std::size_t n);

}  // namespace a3w
