#pragma once

#include <cstdint>

namespace davies {

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t trajectory_index = 0;
};

// SplitMix64 output function.
std::uint64_t mix64(std::uint64_t x);

// Counter-based stream: a pure function of (master_seed, trajectory_index)
// and the draw counter k.
//   key    = mix64(master_seed + phi * (index + 1))
//   bits_k = mix64(key + phi * (k + 1))
//   u_k    = ((bits_k >> 11) + 0.5) * 2^-53, in the open interval (0, 1)
// with phi = 0x9E3779B97F4A7C15 and all arithmetic mod 2^64.
class RandomStream {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  explicit RandomStream(const SeedSpec& seed);

  std::uint64_t next_bits();
  double uniform();
  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace davies
