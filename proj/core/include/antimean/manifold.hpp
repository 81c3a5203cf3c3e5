#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "antimean/matrix.hpp"

namespace antimean {

// A point [x] of RP^m, stored as the unit representative whose
// largest-magnitude component is positive.
class ProjectivePoint {
 public:
  // Normalizes v and fixes its sign. Throws InvalidInput for a zero or
  // non-finite vector, or a vector of length < 2.
  static ProjectivePoint canonicalize(std::span<const double> v);

  std::size_t dim() const noexcept { return coords_.size() - 1; }
  std::size_t ambient() const noexcept { return coords_.size(); }
  const Vector& coords() const noexcept { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

 private:
  explicit ProjectivePoint(Vector coords) : coords_(std::move(coords)) {}
  Vector coords_;
};

inline ProjectivePoint canonicalize(std::span<const double> v) { return ProjectivePoint::canonicalize(v); }

// Largest |coordinate difference| between canonical representatives.
double point_distance_inf(const ProjectivePoint& a, const ProjectivePoint& b);

// A point of (RP^m)^q. All components share the same m.
class ProjectiveShape {
 public:
  explicit ProjectiveShape(std::vector<ProjectivePoint> components);

  std::size_t q() const noexcept { return components_.size(); }
  std::size_t dim() const noexcept { return components_.front().dim(); }
  const ProjectivePoint& operator[](std::size_t s) const { return components_[s]; }
  const std::vector<ProjectivePoint>& components() const noexcept { return components_; }

 private:
  std::vector<ProjectivePoint> components_;
};

// Throws ShapeMismatch unless every shape has the same q and m as the first.
void check_uniform(std::span<const ProjectiveShape> shapes);

// --- Unit quaternions modulo sign (RP^3 as a Lie group) -------------------
// Coordinates are (w, x, y, z) with w the real part.

using Vec3 = std::array<double, 3>;

ProjectivePoint quaternion_identity();
ProjectivePoint quat_mul(const ProjectivePoint& p, const ProjectivePoint& r);
ProjectivePoint quat_inv(const ProjectivePoint& p);

// Axis-angle log at the identity: with the representative (w, v), w > 0,
// returns 2 acos(w) v / |v| (zero when |v| = 0). Throws ChartDomainError when
// |w| <= 1e-12.
Vec3 log_chart(const ProjectivePoint& p);
// Inverse of log_chart: [(cos(|u|/2), sin(|u|/2) u/|u|)]. Requires |u| < pi.
ProjectivePoint exp_chart(const Vec3& u);

ProjectiveShape identity_shape(std::size_t q);
// Componentwise (A_s^{-1} if invert_first else A_s) * B_s.
ProjectiveShape shape_group_op(const ProjectiveShape& a, const ProjectiveShape& b, bool invert_first);
// Concatenated log_chart of every component (length 3q).
Vector shape_log_chart(const ProjectiveShape& s);

}  // namespace antimean
