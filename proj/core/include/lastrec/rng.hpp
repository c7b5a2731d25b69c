#pragma once

#include <cmath>
#include <cstdint>

namespace lastrec {

/// Deterministic counter-seeded random stream (xoshiro256** state space,
/// seeded through splitmix64 from the pair (seed, stream_id)).
///
/// Two streams constructed from the same (seed, stream_id) produce identical
/// draw sequences; distinct stream_ids give statistically independent streams,
/// which is what the simulator relies on to key one stream per replicate.
/// A stream is single-owner: never share one instance across threads.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1));
    for (auto& s : state_) s = splitmix64(x);
    // avoid the all-zero state (possible only for adversarial seeds)
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform draw in (0, 1].
  double uniform() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  /// Rate-1 exponential draw, always finite.
  double exponential() { return -std::log(uniform()); }

  /// Geometric draw on {1,2,...} with success probability p in (0,1].
  std::uint64_t geometric(double p) {
    if (p >= 1.0) return 1;
    const double g = std::floor(std::log(uniform()) / std::log1p(-p));
    if (g >= 9.2e18) return UINT64_MAX;
    return static_cast<std::uint64_t>(g) + 1;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_[4];
  std::uint64_t seed_;
  std::uint64_t stream_id_;
};

}  // namespace lastrec
