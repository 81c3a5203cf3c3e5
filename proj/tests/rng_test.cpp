#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <set>

#include "antimean/errors.hpp"
#include "antimean/rng.hpp"

namespace antimean {
namespace {

// Straight transcription of the documented generator.
std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

TEST(Rng, MatchesDocumentedDefinition) {
  for (std::uint64_t seed : {0ull, 1ull, 0xDEADBEEFull}) {
    for (std::uint64_t stream : {0ull, 7ull, 1000000ull}) {
      const std::uint64_t key = mix(seed ^ mix(stream ^ 0xD1B54A32D192ED03ull));
      Rng rng(RngStream{seed, stream});
      for (std::uint64_t i = 1; i <= 5; ++i) EXPECT_EQ(rng.next_u64(), mix(key + i * 0x9E3779B97F4A7C15ull));
    }
  }
}

TEST(Rng, Deterministic) {
  const auto a = rng_draw_uniform_indices(RngStream{42, 3}, 17, 100);
  const auto b = rng_draw_uniform_indices(RngStream{42, 3}, 17, 100);
  EXPECT_EQ(a, b);
  const auto c = rng_draw_uniform_indices(RngStream{42, 4}, 17, 100);
  EXPECT_NE(a, c);
}

TEST(Rng, SingletonRange) {
  EXPECT_EQ(rng_draw_uniform_indices(RngStream{1, 1}, 1, 5), (std::vector<std::size_t>{0, 0, 0, 0, 0}));
  EXPECT_THROW(rng_draw_uniform_indices(RngStream{1, 1}, 0, 5), InvalidInput);
}

TEST(Rng, IndexFrequenciesWithinBinomialBound) {
  const std::size_t k = 1000000;
  const auto draws = rng_draw_uniform_indices(RngStream{2024, 0}, 10, k);
  std::vector<std::size_t> counts(10, 0);
  for (auto i : draws) {
    ASSERT_LT(i, 10u);
    ++counts[i];
  }
  const double sigma = std::sqrt(k * 0.1 * 0.9);
  for (auto c : counts) EXPECT_LE(std::abs(static_cast<double>(c) - 1e5), 4.0 * sigma);
}

TEST(Rng, NonPowerOfTwoRangeUnbiased) {
  // 3 does not divide 2^64; rejection keeps the three classes balanced.
  Rng rng(RngStream{5, 5});
  std::vector<std::size_t> counts(3, 0);
  const std::size_t k = 300000;
  for (std::size_t i = 0; i < k; ++i) ++counts[rng.index(3)];
  const double sigma = std::sqrt(k * (1.0 / 3) * (2.0 / 3));
  for (auto c : counts) EXPECT_LE(std::abs(static_cast<double>(c) - k / 3.0), 4.0 * sigma);
}

TEST(Rng, UniformAndNormalMoments) {
  Rng rng(RngStream{9, 0});
  const int n = 200000;
  double su = 0, su2 = 0, sn = 0, sn2 = 0, sn4 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    su2 += u * u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
    sn4 += z * z * z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 4.0 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(su2 / n, 1.0 / 3, 0.005);
  EXPECT_NEAR(sn / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(sn2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(sn4 / n, 3.0, 4.0 * std::sqrt(96.0 / n));
}

TEST(Rng, NeighbouringStreamsUncorrelated) {
  const int n = 100000;
  Rng a(RngStream{77, 0});
  Rng b(RngStream{77, 1});
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += (a.uniform() - 0.5) * (b.uniform() - 0.5);
  EXPECT_NEAR(s / n, 0.0, 4.0 / 12.0 / std::sqrt(n));
}

TEST(Rng, DistinctStreamsGiveDistinctFirstDraws) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t id = 0; id < 10000; ++id) seen.insert(Rng(RngStream{3, id}).next_u64());
  EXPECT_EQ(seen.size(), 10000u);
}

}  // namespace
}  // namespace antimean
