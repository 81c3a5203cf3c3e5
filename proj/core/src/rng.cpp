#include "antimean/rng.hpp"

#include <cmath>
#include <numbers>
#include <tuple>
#include <utility>

#include "antimean/errors.hpp"

namespace antimean {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ULL;

constexpr std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(RngStream stream) : state_(mix(stream.seed ^ mix(stream.stream_id ^ kStreamSalt))) {}

std::uint64_t Rng::next_u64() {
  state_ += kGolden;
  return mix(state_);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

namespace {

// Full 128-bit product a * b as (high, low) words.
std::pair<std::uint64_t, std::uint64_t> mul_wide(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t a_lo = a & 0xFFFFFFFFu, a_hi = a >> 32;
  const std::uint64_t b_lo = b & 0xFFFFFFFFu, b_hi = b >> 32;
  const std::uint64_t ll = a_lo * b_lo;
  const std::uint64_t lh = a_lo * b_hi;
  const std::uint64_t hl = a_hi * b_lo;
  const std::uint64_t hh = a_hi * b_hi;
  const std::uint64_t mid = (ll >> 32) + (lh & 0xFFFFFFFFu) + (hl & 0xFFFFFFFFu);
  const std::uint64_t high = hh + (lh >> 32) + (hl >> 32) + (mid >> 32);
  const std::uint64_t low = (mid << 32) | (ll & 0xFFFFFFFFu);
  return {high, low};
}

}  // namespace

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw InvalidInput("Rng::index: empty range");
  const std::uint64_t range = n;
  auto [high, low] = mul_wide(next_u64(), range);
  if (low < range) {
    const std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) std::tie(high, low) = mul_wide(next_u64(), range);
  }
  return static_cast<std::size_t>(high);
}

std::vector<std::size_t> rng_draw_uniform_indices(RngStream stream, std::size_t n, std::size_t k) {
  if (n == 0) throw InvalidInput("rng_draw_uniform_indices: n must be >= 1");
  Rng rng(stream);
  std::vector<std::size_t> out(k);
  for (auto& i : out) i = rng.index(n);
  return out;
}

}  // namespace antimean
