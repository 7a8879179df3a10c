#pragma once

#include <array>
#include <cstdint>

#include "convexlse/types.hpp"

// Counter-based random numbers (Philox4x32-10). Every Monte Carlo sample i
// reads from its own stream (seed, i), so parallel and serial runs see the
// same draws and reductions in sample-index order are reproducible bit for
// bit regardless of worker count.

namespace convexlse::rng {

// One 128-bit block keyed by (key, stream, block_index); Random123-compatible.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);
std::array<std::uint32_t, 4> philox_block(std::uint64_t key, std::uint64_t stream,
                                          std::uint64_t block_index);

// Standard normals from one (seed, stream) pair via Box-Muller.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream) {}

  double next();
  void fill(MutSpan out);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Sub-seed for an independent purpose (risk vs t_mu vs design generation ...)
// so different stages of one run never share streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag,
                                 std::uint64_t index = 0) {
  return splitmix64(seed ^ splitmix64(tag * 0x9E3779B97F4A7C15ull + index));
}

}  // namespace convexlse::rng
