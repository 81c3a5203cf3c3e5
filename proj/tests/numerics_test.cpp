#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "antimean/errors.hpp"
#include "antimean/numerics.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace antimean {
namespace {

using testing::quadrature_cdf;
using testing::quadrature_quantile;
using testing::random_rotation;

// Leibniz expansion; deliberately unrelated to the LU determinant.
double leibniz_det(const Matrix& a) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double total = 0.0;
  do {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    double prod = inversions % 2 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) prod *= a(i, perm[i]);
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// Roots of det(A - lambda I) by sign-change scan plus bisection.
Vector charpoly_roots(const Matrix& a) {
  const std::size_t n = a.rows();
  double radius = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j) r += std::abs(a(i, j));
    radius = std::max(radius, r);
  }
  auto p = [&](double lambda) {
    Matrix shifted = a;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= lambda;
    return leibniz_det(shifted);
  };
  Vector roots;
  const int steps = 40000;
  double lo = -radius - 1e-3;
  double plo = p(lo);
  for (int k = 1; k <= steps; ++k) {
    double hi = -radius - 1e-3 + (2.0 * radius + 2e-3) * k / steps;
    double phi = p(hi);
    if (plo == 0.0 || (plo < 0.0) != (phi < 0.0)) {
      double a_ = lo, b_ = hi, pa = plo;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a_ + b_);
        const double pm = p(mid);
        if ((pm < 0.0) == (pa < 0.0)) {
          a_ = mid;
          pa = pm;
        } else {
          b_ = mid;
        }
      }
      roots.push_back(0.5 * (a_ + b_));
    }
    lo = hi;
    plo = phi;
  }
  return roots;
}

Matrix random_symmetric(Rng& rng, std::size_t n) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = rng.normal();
  return a;
}

TEST(EighSym, DiagonalCase) {
  const EigenDecomp e = eigh_sym(Matrix::from_rows({{3, 0, 0}, {0, 1, 0}, {0, 0, 2}}));
  EXPECT_DOUBLE_EQ(e.values[0], 1.0);
  EXPECT_DOUBLE_EQ(e.values[1], 2.0);
  EXPECT_DOUBLE_EQ(e.values[2], 3.0);
  EXPECT_EQ(e.vector(0), (Vector{0, 1, 0}));
  EXPECT_EQ(e.vector(1), (Vector{0, 0, 1}));
  EXPECT_EQ(e.vector(2), (Vector{1, 0, 0}));
}

TEST(EighSym, IdentityGivesOrthonormalVectors) {
  const EigenDecomp e = eigh_sym(Matrix::identity(4));
  for (double v : e.values) EXPECT_DOUBLE_EQ(v, 1.0);
  const Matrix vtv = e.vectors.transpose() * e.vectors;
  EXPECT_LT(testing::max_abs_diff(vtv, Matrix::identity(4)), 1e-14);
}

TEST(EighSym, MatchesCharacteristicPolynomialRoots) {
  Rng rng(RngStream{11, 0});
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = random_symmetric(rng, 4);
    const EigenDecomp e = eigh_sym(a);
    const Vector roots = charpoly_roots(a);
    ASSERT_EQ(roots.size(), 4u) << "trial " << trial;
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(e.values[k], roots[k], 1e-8);
  }
}

TEST(EighSym, ResidualAndOrthogonality) {
  Rng rng(RngStream{12, 0});
  for (std::size_t n : {2u, 3u, 4u, 7u}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix a = random_symmetric(rng, n);
      const EigenDecomp e = eigh_sym(a);
      for (std::size_t k = 0; k < n; ++k) {
        const Vector v = e.vector(k);
        Vector r = a * v;
        for (std::size_t i = 0; i < n; ++i) r[i] -= e.values[k] * v[i];
        EXPECT_LE(norm(r), 1e-8 * a.frobenius_norm());
        EXPECT_NEAR(norm(v), 1.0, 1e-12);
        EXPECT_GT(v[sign_anchor(v)], 0.0);
        if (k > 0) EXPECT_LE(e.values[k - 1], e.values[k]);
      }
    }
  }
}

TEST(EighSym, SpectrumIsOrthogonallyInvariant) {
  Rng rng(RngStream{13, 0});
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_symmetric(rng, 4);
    const Matrix q = random_rotation(rng, 4);
    const EigenDecomp e1 = eigh_sym(a);
    Matrix b = q * a * q.transpose();
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < i; ++j) b(i, j) = b(j, i);
    const EigenDecomp e2 = eigh_sym(b);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(e1.values[k], e2.values[k], 1e-8);
  }
}

TEST(EighSym, RejectsBadInput) {
  EXPECT_THROW(eigh_sym(Matrix::from_rows({{1, 2}, {0, 1}})), InvalidInput);
  EXPECT_THROW(eigh_sym(Matrix(2, 3)), InvalidInput);
  EXPECT_THROW(eigh_sym(Matrix::from_rows({{1, NAN}, {NAN, 1}})), InvalidInput);
}

TEST(SignCanon, LargestMagnitudePositiveLowestIndexTieBreak) {
  Vector v{0.0, -2.0};
  canonicalize_sign(v);
  EXPECT_EQ(v, (Vector{0.0, 2.0}));
  Vector tie{0.5, -0.5};
  canonicalize_sign(tie);
  EXPECT_EQ(tie, (Vector{0.5, -0.5}));
  Vector tie2{-0.5, 0.5};
  canonicalize_sign(tie2);
  EXPECT_EQ(tie2, (Vector{0.5, -0.5}));
}

// ---- chi-square against quadrature --------------------------------------

TEST(ChiSquare, ClosedForms) {
  for (int k = 1; k <= 12; ++k) EXPECT_EQ(chisq_cdf(0.0, k), 0.0);
  EXPECT_NEAR(chisq_cdf(2.0 * std::log(2.0), 2), 0.5, 1e-14);
  EXPECT_NEAR(chisq_quantile(0.5, 2), 2.0 * std::log(2.0), 1e-10);
  for (double x : {0.1, 1.0, 5.0, 40.0}) EXPECT_NEAR(chisq_cdf(x, 2), 1.0 - std::exp(-0.5 * x), 1e-14);
}

TEST(ChiSquare, CdfMatchesQuadrature) {
  EXPECT_NEAR(chisq_cdf(12.5916, 6), 0.95, 1e-4);
  for (int k : {1, 2, 3, 5, 6, 9, 12, 30})
    for (double x : {0.05, 0.7, 2.0, 6.5, 15.0, 35.0}) EXPECT_NEAR(chisq_cdf(x, k), quadrature_cdf(x, k), 1e-9) << k << " " << x;
}

TEST(ChiSquare, QuantileMatchesQuadrature) {
  EXPECT_NEAR(chisq_quantile(0.95, 1), 3.84146, 1e-4);
  for (int k : {1, 3, 6, 12})
    for (double p : {0.05, 0.5, 0.95, 0.99}) EXPECT_NEAR(chisq_quantile(p, k), quadrature_quantile(p, k), 1e-6);
}

TEST(ChiSquare, RoundTrips) {
  for (int k : {1, 3, 6})
    for (double x : {0.5, 3.0, 10.0}) EXPECT_NEAR(chisq_quantile(chisq_cdf(x, k), k), x, 1e-6);
  for (int k : {1, 3, 6, 12})
    for (double p : {1e-6, 0.01, 0.3, 0.95, 0.999999}) EXPECT_NEAR(chisq_cdf(chisq_quantile(p, k), k), p, 1e-8);
}

TEST(ChiSquare, MonotoneAndBounded) {
  for (int k = 1; k <= 12; ++k) {
    double prev = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double x = 0.05 * i;
      const double c = chisq_cdf(x, k);
      EXPECT_GE(c, prev);
      EXPECT_LE(c, 1.0);
      EXPECT_NEAR(c + chisq_sf(x, k), 1.0, 1e-12);
      prev = c;
    }
  }
}

TEST(ChiSquare, UpperTailKeepsPrecision) {
  // 1 - cdf would round to 0 here.
  EXPECT_GT(chisq_sf(200.0, 3), 0.0);
  EXPECT_NEAR(chisq_sf(200.0, 2), std::exp(-100.0), 1e-55);
}

TEST(ChiSquare, DomainErrors) {
  EXPECT_THROW(chisq_cdf(-1.0, 3), InvalidInput);
  EXPECT_THROW(chisq_cdf(1.0, 0), InvalidInput);
  EXPECT_THROW(chisq_quantile(0.0, 3), InvalidInput);
  EXPECT_THROW(chisq_quantile(1.0, 3), InvalidInput);
  EXPECT_THROW(chisq_quantile(0.5, -2), InvalidInput);
}

TEST(Matrix, SolveAndDeterminant) {
  Rng rng(RngStream{14, 0});
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) a(i, j) = rng.normal();
    EXPECT_NEAR(determinant(a), leibniz_det(a), 1e-10);
    const Vector x = testing::gaussian_vector(rng, 4);
    const Vector b = a * x;
    const Vector y = solve(a, b);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(y[i], x[i], 1e-9);
  }
  EXPECT_THROW(solve(Matrix::from_rows({{1, 2}, {2, 4}}), Vector{1, 1}), InvalidInput);
}

}  // namespace
}  // namespace antimean
