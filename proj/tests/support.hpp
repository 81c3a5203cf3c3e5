#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "antimean/data.hpp"
#include "antimean/inference.hpp"
#include "antimean/manifold.hpp"
#include "antimean/matrix.hpp"
#include "antimean/rng.hpp"

namespace antimean::testing {

inline Vector gaussian_vector(Rng& rng, std::size_t k) {
  Vector v(k);
  for (double& x : v) x = rng.normal();
  return v;
}

inline ProjectivePoint random_point(Rng& rng, std::size_t m) { return canonicalize(gaussian_vector(rng, m + 1)); }

inline ProjectiveShape random_shape(Rng& rng, std::size_t q, std::size_t m) {
  std::vector<ProjectivePoint> comps;
  for (std::size_t s = 0; s < q; ++s) comps.push_back(random_point(rng, m));
  return ProjectiveShape(std::move(comps));
}

inline Sample random_sample(Rng& rng, std::size_t n, std::size_t q, std::size_t m) {
  Sample out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_shape(rng, q, m));
  return out;
}

inline ProjectiveShape single(std::initializer_list<double> coords) {
  return ProjectiveShape({canonicalize(Vector(coords))});
}

// Haar-ish rotation in SO(k): Gram-Schmidt on a Gaussian matrix, last column
// flipped if needed.
inline Matrix random_rotation(Rng& rng, std::size_t k) {
  Matrix q(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    Vector v = gaussian_vector(rng, k);
    for (std::size_t i = 0; i < j; ++i) {
      const Vector prev = q.column(i);
      const double c = dot(v, prev);
      for (std::size_t r = 0; r < k; ++r) v[r] -= c * prev[r];
    }
    const double nv = norm(v);
    for (double& x : v) x /= nv;
    q.set_column(j, v);
  }
  if (determinant(q) < 0.0)
    for (std::size_t r = 0; r < k; ++r) q(r, k - 1) = -q(r, k - 1);
  return q;
}

inline ProjectivePoint rotate(const Matrix& t, const ProjectivePoint& p) { return canonicalize(t * p.coords()); }

inline ProjectiveShape rotate(const Matrix& t, const ProjectiveShape& s) {
  std::vector<ProjectivePoint> comps;
  for (const auto& c : s.components()) comps.push_back(rotate(t, c));
  return ProjectiveShape(std::move(comps));
}

inline Sample rotate(const Matrix& t, const Sample& sample) {
  Sample out;
  for (const auto& s : sample) out.push_back(rotate(t, s));
  return out;
}

// Distance between sign classes, insensitive to the representative:
// min |a/|a| -+ b/|b||, which is about the angle for nearby classes. (The
// sqrt(1 - cos^2) form cannot resolve angles below ~1e-8.)
inline double axial_gap(std::span<const double> a, std::span<const double> b) {
  const double na = norm(a), nb = norm(b);
  double minus = 0.0, plus = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    minus += std::pow(a[i] / na - b[i] / nb, 2);
    plus += std::pow(a[i] / na + b[i] / nb, 2);
  }
  return std::sqrt(std::min(minus, plus));
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

}  // namespace antimean::testing
