#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace antimean {

// Immutable descriptor of a random stream. Equal descriptors produce equal
// draw sequences on every platform.
//
// Generator definition (bit-exact):
//   mix(z):  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//            z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//            return z ^ (z >> 31)
//   key    = mix(seed ^ mix(stream_id ^ 0xD1B54A32D192ED03))
//   draw i (i = 1, 2, ...) = mix(key + i * 0x9E3779B97F4A7C15)   (mod 2^64)
// i.e. SplitMix64 started at `key`. Distinct stream_ids give unrelated keys.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

class Rng {
 public:
  explicit Rng(RngStream stream);

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal();
  // Unbiased uniform integer in [0, n) (Lemire's multiply-shift with rejection).
  std::size_t index(std::size_t n);

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// k uniform indices in [0, n). Throws InvalidInput when n == 0.
std::vector<std::size_t> rng_draw_uniform_indices(RngStream stream, std::size_t n, std::size_t k);

}  // namespace antimean
