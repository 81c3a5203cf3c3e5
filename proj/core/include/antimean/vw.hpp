#pragma once

#include <span>
#include <vector>

#include "antimean/manifold.hpp"
#include "antimean/matrix.hpp"
#include "antimean/numerics.hpp"

namespace antimean {

// Relative eigengap tolerance: a block B is treated as focal when
// d(2) - d(1) <= kDefaultGapTol * tr(B).
inline constexpr double kDefaultGapTol = 1e-9;

// Veronese-Whitney image j([x]) = x x^T, one block per axial component.
struct EmbeddedPoint {
  std::vector<Matrix> blocks;
};

EmbeddedPoint vw_embed(const ProjectivePoint& p);
EmbeddedPoint vw_embed_shape(const ProjectiveShape& s);

// Squared chord distance sum_s tr((A_s - B_s)^2) between block lists of
// matching shapes (embedded or arbitrary ambient symmetric matrices).
double chord_dist_sq(std::span<const Matrix> a, std::span<const Matrix> b);
double chord_dist_sq(const EmbeddedPoint& a, const EmbeddedPoint& b);

// Empirical Frechet function (1/n) sum_i d0(j(p), j(x_i)).
double frechet_value(const ProjectivePoint& p, std::span<const ProjectivePoint> sample);
double frechet_value(const ProjectiveShape& p, std::span<const ProjectiveShape> sample);

// Absolute gap d(2) - d(1) below which a block is focal.
double focal_threshold(const Matrix& block, double gap_tol);

// Throws FocalPointError(block, gap) unless d(2) - d(1) > focal_threshold.
void require_nonfocal(const EigenDecomp& eig, const Matrix& block, std::size_t block_index, double gap_tol);

// Farthest projection onto the embedded manifold, blockwise: each block maps
// to the canonicalized eigenvector of its smallest eigenvalue.
ProjectiveShape farthest_project(std::span<const Matrix> blocks, double gap_tol = kDefaultGapTol);
ProjectivePoint farthest_project(const Matrix& block, double gap_tol = kDefaultGapTol);

}  // namespace antimean
