#include "antimean/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "antimean/errors.hpp"
#include "antimean/numerics.hpp"

namespace antimean {

ProjectivePoint ProjectivePoint::canonicalize(std::span<const double> v) {
  if (v.size() < 2) throw InvalidInput("projective point needs at least 2 homogeneous coordinates");
  for (double x : v)
    if (!std::isfinite(x)) throw InvalidInput("projective point has a non-finite coordinate");
  const double len = norm(v);
  if (!(len > 0.0)) throw InvalidInput("cannot canonicalize the zero vector");
  Vector c(v.begin(), v.end());
  for (double& x : c) x /= len;
  canonicalize_sign(c);
  return ProjectivePoint(std::move(c));
}

double point_distance_inf(const ProjectivePoint& a, const ProjectivePoint& b) {
  if (a.ambient() != b.ambient()) throw ShapeMismatch("points of different dimension");
  double d = 0.0;
  for (std::size_t i = 0; i < a.ambient(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

ProjectiveShape::ProjectiveShape(std::vector<ProjectivePoint> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw InvalidInput("projective shape needs q >= 1 components");
  for (const auto& c : components_)
    if (c.dim() != components_.front().dim()) throw ShapeMismatch("shape components differ in dimension");
}

void check_uniform(std::span<const ProjectiveShape> shapes) {
  if (shapes.empty()) return;
  const std::size_t q = shapes.front().q();
  const std::size_t m = shapes.front().dim();
  for (const auto& s : shapes)
    if (s.q() != q || s.dim() != m) throw ShapeMismatch("sample mixes shapes of different (q, m)");
}

namespace {

void require_quaternion(const ProjectivePoint& p) {
  if (p.dim() != 3) throw ShapeMismatch("quaternion operation needs a point of RP^3");
}

}  // namespace

ProjectivePoint quaternion_identity() {
  const double e[4] = {1.0, 0.0, 0.0, 0.0};
  return canonicalize(e);
}

ProjectivePoint quat_mul(const ProjectivePoint& p, const ProjectivePoint& r) {
  require_quaternion(p);
  require_quaternion(r);
  const double a1 = p[0], b1 = p[1], c1 = p[2], d1 = p[3];
  const double a2 = r[0], b2 = r[1], c2 = r[2], d2 = r[3];
  const double h[4] = {
      a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
      a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
      a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
      a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
  };
  return canonicalize(h);
}

ProjectivePoint quat_inv(const ProjectivePoint& p) {
  require_quaternion(p);
  const double c[4] = {p[0], -p[1], -p[2], -p[3]};
  return canonicalize(c);
}

Vec3 log_chart(const ProjectivePoint& p) {
  require_quaternion(p);
  double w = p[0];
  Vec3 v{p[1], p[2], p[3]};
  if (std::abs(w) <= 1e-12) throw ChartDomainError("log chart: point lies on the cut set (real part 0)");
  if (w < 0.0) {
    w = -w;
    for (double& x : v) x = -x;
  }
  const double vn = norm(v);
  if (vn == 0.0) return {0.0, 0.0, 0.0};
  // atan2 is accurate near both ends, unlike acos(w) for w close to 1.
  const double angle = 2.0 * std::atan2(vn, w);
  return {angle * v[0] / vn, angle * v[1] / vn, angle * v[2] / vn};
}

ProjectivePoint exp_chart(const Vec3& u) {
  const double theta = norm(u);
  if (!(theta < std::numbers::pi)) throw ChartDomainError("exp chart: |u| must be < pi");
  if (theta == 0.0) return quaternion_identity();
  const double s = std::sin(0.5 * theta) / theta;
  const double h[4] = {std::cos(0.5 * theta), s * u[0], s * u[1], s * u[2]};
  return canonicalize(h);
}

ProjectiveShape identity_shape(std::size_t q) {
  return ProjectiveShape(std::vector<ProjectivePoint>(q, quaternion_identity()));
}

ProjectiveShape shape_group_op(const ProjectiveShape& a, const ProjectiveShape& b, bool invert_first) {
  if (a.q() != b.q()) throw ShapeMismatch("group operation on shapes with different q");
  std::vector<ProjectivePoint> out;
  out.reserve(a.q());
  for (std::size_t s = 0; s < a.q(); ++s)
    out.push_back(quat_mul(invert_first ? quat_inv(a[s]) : a[s], b[s]));
  return ProjectiveShape(std::move(out));
}

Vector shape_log_chart(const ProjectiveShape& s) {
  Vector out;
  out.reserve(3 * s.q());
  for (const auto& c : s.components()) {
    const Vec3 u = log_chart(c);
    out.insert(out.end(), u.begin(), u.end());
  }
  return out;
}

}  // namespace antimean
