#include "davies/rng.hpp"

namespace davies {

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(const SeedSpec& seed)
    : key_(mix64(seed.master_seed + kGolden * (seed.trajectory_index + 1))) {}

std::uint64_t RandomStream::next_bits() {
  ++counter_;
  return mix64(key_ + kGolden * counter_);
}

double RandomStream::uniform() {
  return (static_cast<double>(next_bits() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace davies
