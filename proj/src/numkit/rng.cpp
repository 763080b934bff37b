#include "a3w/numkit/rng.hpp"

#include <cmath>
#include <numbers>

namespace a3w {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

inline std::uint64_t join(std::uint32_t hi, std::uint32_t lo) {
  return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

inline double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> RngStream::block(std::uint64_t counter) const {
  return philox({static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32),
                 static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)},
                {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
}

std::uint64_t RngStream::next_u64() {
  const auto b = block(counter_++);
  return join(b[0], b[1]);
}

double RngStream::uniform() { return to_unit(next_u64()); }

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
  // Lemire's multiply-shift with rejection of the biased low region.
  const std::uint64_t threshold = -n % n;
  for (;;) {
    const unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    if (static_cast<std::uint64_t>(m) >= threshold) return static_cast<std::uint64_t>(m >> 64);
  }
}

double RngStream::gaussian() {
  const auto b = block(counter_++);
  // u1 in (0, 1] keeps the log finite.
  const double u1 = (static_cast<double>(join(b[0], b[1]) >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = to_unit(join(b[2], b[3]));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

RngStream RngStream::substream(std::uint64_t tag) const {
  // Mix the tag into the stream id through one Philox block so nearby tags
  // land far apart.
  const auto b = RngStream(seed_, stream_id_ ^ 0xA3A3A3A3A3A3A3A3ull, 0).block(tag);
  return RngStream(seed_, join(b[0], b[1]), 0);
}

std::vector<double> rng_gaussian(RngStream& stream, std::size_t n) {
  std::vector<double> out(n);
  for (auto& v : out) v = stream.gaussian();
  return out;
}

}  // namespace a3w
