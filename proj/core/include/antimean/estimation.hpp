#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "antimean/manifold.hpp"
#include "antimean/matrix.hpp"
#include "antimean/numerics.hpp"
#include "antimean/vw.hpp"

namespace antimean {

// Per-axial second moments J_s = (1/n) sum_r x_r^s (x_r^s)^T and their
// eigensystems (eigenvalues d_s ascending, eigenvectors g_s).
struct AxialEigensystem {
  std::vector<Matrix> moments;
  std::vector<EigenDecomp> eigen;

  std::size_t q() const noexcept { return moments.size(); }
};

// Sample VW antimean together with everything the test statistics need.
//
// antimean[s] = [g_s(1)], tangent_basis[s] = (g_s(2) ... g_s(m+1)) and
// anticov is the (q m) x (q m) VW anticovariance, indexed by (s, a) in
// lexicographic order.
struct AntimeanEstimate {
  ProjectiveShape antimean;
  AxialEigensystem axial;
  std::vector<Matrix> tangent_basis;
  Matrix anticov;
  std::size_t n = 0;

  std::size_t q() const noexcept { return antimean.q(); }
  std::size_t dim() const noexcept { return antimean.dim(); }
};

// Pooled antimean of g groups. The pooled eigensystem diagonalizes
// J^(p)_s = sum_a (n_a / n) J^a_s, the size-weighted average of the groups'
// embedded sample means.
struct PooledAntimean {
  ProjectiveShape antimean;
  Vector weights;
  AxialEigensystem axial;
  std::vector<Matrix> tangent_basis;
};

AxialEigensystem axial_moments(std::span<const ProjectiveShape> sample);

// Columns 2..m+1 of each eigenvector matrix.
std::vector<Matrix> tangent_basis(std::span<const EigenDecomp> eigen);

// VW anticovariance of `sample` with respect to the eigensystems `eigen`
// (which need not come from the same sample):
//   aS[(s,a),(t,b)] = n^{-1} (d_s(1)-d_s(a))^{-1} (d_t(1)-d_t(b))^{-1}
//                     sum_i (g_s(a).X_i^s)(g_t(b).X_i^t)(g_s(1).X_i^s)(g_t(1).X_i^t)
// Throws FocalPointError when some |d_s(1) - d_s(a)| <= gap_tol * tr(J_s).
Matrix anticovariance_vw(std::span<const ProjectiveShape> sample, const AxialEigensystem& axial,
                         double gap_tol = kDefaultGapTol);

AntimeanEstimate sample_antimean(std::span<const ProjectiveShape> sample, double gap_tol = kDefaultGapTol);

// Block s: D_s^T x_s, where x_s represents target[s] with the sign that makes
// x_s . base[s] >= 0.
Vector tangent_coords(const ProjectiveShape& base, std::span<const Matrix> basis, const ProjectiveShape& target);
Vector tangent_coords(const AntimeanEstimate& base, const ProjectiveShape& target);
Vector tangent_coords(const PooledAntimean& base, const ProjectiveShape& target);

PooledAntimean pooled_antimean(std::span<const AntimeanEstimate> estimates, std::span<const std::size_t> sizes,
                               double gap_tol = kDefaultGapTol);

}  // namespace antimean
