#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "antimean/errors.hpp"
#include "antimean/vw.hpp"
#include "support.hpp"

namespace antimean {
namespace {

using testing::random_point;

ProjectivePoint p(std::initializer_list<double> v) { return canonicalize(Vector(v)); }

// Every point of RP^2 on a 0.5 degree (polar, azimuth) grid of the upper
// hemisphere.
template <typename F>
void for_each_rp2_grid_point(F&& f) {
  const double step = 0.5 * std::numbers::pi / 180.0;
  for (int i = 0; i <= 180; ++i) {
    const double theta = i * step;
    const int az_steps = i == 0 ? 1 : 720;
    for (int j = 0; j < az_steps; ++j) {
      const double phi = j * step;
      f(Vector{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)});
    }
  }
}

double dist_to_ambient(std::span<const double> x, const Matrix& mu) {
  const ProjectivePoint c = canonicalize(x);
  const Matrix blocks[1] = {vw_embed(c).blocks[0]};
  const Matrix target[1] = {mu};
  return chord_dist_sq(blocks, target);
}

TEST(Embedding, Examples) {
  const EmbeddedPoint a = vw_embed(p({0, 1}));
  EXPECT_EQ(a.blocks[0](0, 0), 0.0);
  EXPECT_EQ(a.blocks[0](1, 1), 1.0);
  EXPECT_EQ(a.blocks[0](0, 1), 0.0);
  const EmbeddedPoint b = vw_embed(p({1, 1}));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(b.blocks[0](i, j), 0.5, 1e-15);
}

TEST(Embedding, BlockInvariants) {
  Rng rng(RngStream{31, 0});
  for (int i = 0; i < 20; ++i) {
    const EmbeddedPoint e = vw_embed_shape(testing::random_shape(rng, 3, 3));
    ASSERT_EQ(e.blocks.size(), 3u);
    for (const Matrix& b : e.blocks) {
      EXPECT_NEAR(b.trace(), 1.0, 1e-10);
      EXPECT_LE(testing::max_abs_diff(b, b.transpose()), 0.0);
      EXPECT_LE((b * b - b).frobenius_norm(), 1e-8);
    }
  }
}

TEST(Embedding, RotationEquivariance) {
  Rng rng(RngStream{32, 0});
  for (int i = 0; i < 50; ++i) {
    const Matrix t = testing::random_rotation(rng, 4);
    const ProjectivePoint x = random_point(rng, 3);
    const Matrix lhs = vw_embed(testing::rotate(t, x)).blocks[0];
    const Matrix rhs = t * vw_embed(x).blocks[0] * t.transpose();
    EXPECT_LT(testing::max_abs_diff(lhs, rhs), 1e-12);
  }
}

TEST(ChordDistance, Examples) {
  const EmbeddedPoint e1 = vw_embed(p({1, 0})), e2 = vw_embed(p({0, 1})), d = vw_embed(p({1, 1}));
  EXPECT_EQ(chord_dist_sq(e1, e1), 0.0);
  EXPECT_NEAR(chord_dist_sq(e1, e2), 2.0, 1e-15);
  EXPECT_NEAR(chord_dist_sq(e1, d), 1.0, 1e-15);
}

TEST(ChordDistance, ClosedFormAndInjectivity) {
  Rng rng(RngStream{33, 0});
  for (int i = 0; i < 100; ++i) {
    const ProjectivePoint x = random_point(rng, 3), y = random_point(rng, 3);
    const double c = dot(x.coords(), y.coords());
    EXPECT_NEAR(chord_dist_sq(vw_embed(x), vw_embed(y)), 2.0 - 2.0 * c * c, 1e-12);
    EXPECT_NEAR(chord_dist_sq(vw_embed(x), vw_embed(y)), chord_dist_sq(vw_embed(y), vw_embed(x)), 1e-15);
    EXPECT_EQ(chord_dist_sq(vw_embed(x), vw_embed(x)), 0.0);
  }
  EXPECT_THROW(chord_dist_sq(vw_embed(p({1, 0})), vw_embed(p({1, 0, 0}))), InvalidInput);
}

TEST(Frechet, Examples) {
  const std::vector<ProjectivePoint> one{p({1, 0})};
  EXPECT_EQ(frechet_value(p({1, 0}), one), 0.0);
  EXPECT_NEAR(frechet_value(p({0, 1}), one), 2.0, 1e-15);
  EXPECT_THROW(frechet_value(p({1, 0}), std::vector<ProjectivePoint>{}), InvalidInput);
}

TEST(Frechet, ShapeValueSumsBlocks) {
  Rng rng(RngStream{34, 0});
  const Sample sample = testing::random_sample(rng, 10, 2, 3);
  const ProjectiveShape x = testing::random_shape(rng, 2, 3);
  double expected = 0.0;
  for (const auto& s : sample)
    for (std::size_t k = 0; k < 2; ++k) {
      const double c = dot(x[k].coords(), s[k].coords());
      expected += (2.0 - 2.0 * c * c) / 10.0;
    }
  EXPECT_NEAR(frechet_value(x, sample), expected, 1e-12);
}

TEST(FarthestProjection, Examples) {
  const ProjectivePoint a = farthest_project(Matrix::from_rows({{0.2, 0}, {0, 0.8}}));
  EXPECT_EQ(a.coords(), (Vector{1, 0}));
  try {
    farthest_project(Matrix::from_rows({{0.5, 0}, {0, 0.5}}));
    FAIL() << "expected FocalPointError";
  } catch (const FocalPointError& e) {
    EXPECT_EQ(e.block(), 0u);
    EXPECT_EQ(e.gap(), 0.0);
  }
}

TEST(FarthestProjection, ReportsOffendingBlock) {
  const Matrix blocks[2] = {Matrix::from_rows({{0.2, 0}, {0, 0.8}}), Matrix::from_rows({{0.5, 0}, {0, 0.5}})};
  try {
    farthest_project(std::span<const Matrix>(blocks));
    FAIL() << "expected FocalPointError";
  } catch (const FocalPointError& e) {
    EXPECT_EQ(e.block(), 1u);
  }
}

TEST(FarthestProjection, GapToleranceIsRelative) {
  const double eps = 1e-12;
  const Matrix nearly = Matrix::from_rows({{0.5 - eps, 0}, {0, 0.5 + eps}});
  EXPECT_THROW(farthest_project(nearly), FocalPointError);
  EXPECT_NO_THROW(farthest_project(nearly, 1e-13));
  EXPECT_THROW(farthest_project(1e6 * Matrix::from_rows({{0.5 - 1e-11, 0}, {0, 0.5 + 1e-11}})), FocalPointError);
}

TEST(FarthestProjection, BeatsDenseGridOnRP2) {
  Rng rng(RngStream{35, 0});
  for (int trial = 0; trial < 5; ++trial) {
    Matrix mu(3, 3);
    for (int i = 0; i < 3; ++i) mu += (1.0 / 3.0) * vw_embed(random_point(rng, 2)).blocks[0];
    const ProjectivePoint best = farthest_project(mu);
    const double value = dist_to_ambient(best.coords(), mu);
    double grid_max = 0.0;
    for_each_rp2_grid_point([&](const Vector& x) { grid_max = std::max(grid_max, dist_to_ambient(x, mu)); });
    EXPECT_GE(value, grid_max - 1e-6);
    EXPECT_LE(value - grid_max, 1e-3);  // the grid gets close
  }
}

TEST(FarthestProjection, DominatesGridOnRP1AndRP2) {
  Rng rng(RngStream{36, 0});
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = trial % 2 ? 1 : 2;
    Matrix mu(m + 1, m + 1);
    for (int i = 0; i < 4; ++i) mu += 0.25 * vw_embed(random_point(rng, m)).blocks[0];
    const double value = dist_to_ambient(farthest_project(mu).coords(), mu);
    if (m == 1) {
      for (int k = 0; k < 720; ++k) {
        const double t = k * std::numbers::pi / 720;
        EXPECT_GE(value, dist_to_ambient(Vector{std::cos(t), std::sin(t)}, mu) - 1e-6);
      }
    } else {
      for (int k = 0; k < 2000; ++k) EXPECT_GE(value, dist_to_ambient(random_point(rng, 2).coords(), mu) - 1e-6);
    }
  }
}

TEST(FarthestProjection, RotationEquivariant) {
  Rng rng(RngStream{37, 0});
  for (int trial = 0; trial < 50; ++trial) {
    Matrix mu(4, 4);
    for (int i = 0; i < 5; ++i) mu += 0.2 * vw_embed(random_point(rng, 3)).blocks[0];
    const Matrix t = testing::random_rotation(rng, 4);
    Matrix rotated = t * mu * t.transpose();
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < i; ++j) rotated(i, j) = rotated(j, i);
    const ProjectivePoint lhs = farthest_project(rotated);
    const ProjectivePoint rhs = testing::rotate(t, farthest_project(mu));
    EXPECT_LE(point_distance_inf(lhs, rhs), 1e-9);
  }
}

}  // namespace
}  // namespace antimean
