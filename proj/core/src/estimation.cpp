#include "antimean/estimation.hpp"

#include <cmath>

#include "antimean/errors.hpp"

namespace antimean {

AxialEigensystem axial_moments(std::span<const ProjectiveShape> sample) {
  if (sample.empty()) throw InvalidInput("axial moments of an empty sample");
  check_uniform(sample);
  const std::size_t q = sample.front().q();
  const std::size_t k = sample.front().dim() + 1;
  const double inv_n = 1.0 / static_cast<double>(sample.size());

  AxialEigensystem out;
  out.moments.assign(q, Matrix(k, k));
  for (const auto& shape : sample)
    for (std::size_t s = 0; s < q; ++s) {
      const Vector& x = shape[s].coords();
      Matrix& j = out.moments[s];
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a; b < k; ++b) j(a, b) += x[a] * x[b];
    }
  for (auto& j : out.moments)
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a; b < k; ++b) {
        j(a, b) *= inv_n;
        j(b, a) = j(a, b);
      }
  out.eigen.reserve(q);
  for (const auto& j : out.moments) out.eigen.push_back(eigh_sym(j));
  return out;
}

std::vector<Matrix> tangent_basis(std::span<const EigenDecomp> eigen) {
  std::vector<Matrix> out;
  out.reserve(eigen.size());
  for (const auto& e : eigen) {
    const std::size_t k = e.size();
    Matrix d(k, k - 1);
    for (std::size_t c = 1; c < k; ++c)
      for (std::size_t r = 0; r < k; ++r) d(r, c - 1) = e.vectors(r, c);
    out.push_back(std::move(d));
  }
  return out;
}

Matrix anticovariance_vw(std::span<const ProjectiveShape> sample, const AxialEigensystem& axial, double gap_tol) {
  if (sample.empty()) throw InvalidInput("anticovariance of an empty sample");
  check_uniform(sample);
  const std::size_t q = axial.q();
  if (sample.front().q() != q) throw ShapeMismatch("anticovariance: sample and eigensystem differ in q");
  const std::size_t m = sample.front().dim();
  const std::size_t dim = q * m;

  // inv_gap[s][a-1] = 1 / (d_s(1) - d_s(a)), a = 2..m+1.
  std::vector<Vector> inv_gap(q, Vector(m));
  for (std::size_t s = 0; s < q; ++s) {
    const auto& d = axial.eigen[s].values;
    const double threshold = focal_threshold(axial.moments[s], gap_tol);
    for (std::size_t a = 1; a <= m; ++a) {
      const double gap = d[0] - d[a];
      if (!(std::abs(gap) > threshold)) throw FocalPointError(s, std::abs(gap), threshold);
      inv_gap[s][a - 1] = 1.0 / gap;
    }
  }

  // aS is the mean of w_i w_i^T with
  // w_i[(s,a)] = (g_s(a).X_i^s)(g_s(1).X_i^s) / (d_s(1) - d_s(a)),
  // which is the entrywise formula regrouped.
  Matrix acc(dim, dim);
  Vector w(dim);
  for (const auto& shape : sample) {
    for (std::size_t s = 0; s < q; ++s) {
      const Matrix& g = axial.eigen[s].vectors;
      const Vector& x = shape[s].coords();
      double p1 = 0.0;
      for (std::size_t r = 0; r <= m; ++r) p1 += g(r, 0) * x[r];
      for (std::size_t a = 1; a <= m; ++a) {
        double pa = 0.0;
        for (std::size_t r = 0; r <= m; ++r) pa += g(r, a) * x[r];
        w[s * m + a - 1] = pa * p1 * inv_gap[s][a - 1];
      }
    }
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i; j < dim; ++j) acc(i, j) += w[i] * w[j];
  }
  const double inv_n = 1.0 / static_cast<double>(sample.size());
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i; j < dim; ++j) {
      acc(i, j) *= inv_n;
      acc(j, i) = acc(i, j);
    }
  return acc;
}

AntimeanEstimate sample_antimean(std::span<const ProjectiveShape> sample, double gap_tol) {
  AxialEigensystem axial = axial_moments(sample);
  std::vector<ProjectivePoint> components;
  components.reserve(axial.q());
  for (std::size_t s = 0; s < axial.q(); ++s) {
    require_nonfocal(axial.eigen[s], axial.moments[s], s, gap_tol);
    components.push_back(canonicalize(axial.eigen[s].vector(0)));
  }
  Matrix anticov = anticovariance_vw(sample, axial, gap_tol);
  auto basis = tangent_basis(axial.eigen);
  return AntimeanEstimate{ProjectiveShape(std::move(components)), std::move(axial), std::move(basis),
                          std::move(anticov), sample.size()};
}

Vector tangent_coords(const ProjectiveShape& base, std::span<const Matrix> basis, const ProjectiveShape& target) {
  if (base.q() != target.q() || base.dim() != target.dim() || basis.size() != base.q())
    throw ShapeMismatch("tangent coordinates: base and target differ in (q, m)");
  const std::size_t m = base.dim();
  Vector out;
  out.reserve(base.q() * m);
  for (std::size_t s = 0; s < base.q(); ++s) {
    const Vector& x = target[s].coords();
    const double sign = dot(x, base[s].coords()) < 0.0 ? -1.0 : 1.0;
    const Matrix& d = basis[s];
    for (std::size_t c = 0; c < m; ++c) {
      double v = 0.0;
      for (std::size_t r = 0; r <= m; ++r) v += d(r, c) * x[r];
      out.push_back(sign * v);
    }
  }
  return out;
}

Vector tangent_coords(const AntimeanEstimate& base, const ProjectiveShape& target) {
  return tangent_coords(base.antimean, base.tangent_basis, target);
}

Vector tangent_coords(const PooledAntimean& base, const ProjectiveShape& target) {
  return tangent_coords(base.antimean, base.tangent_basis, target);
}

PooledAntimean pooled_antimean(std::span<const AntimeanEstimate> estimates, std::span<const std::size_t> sizes,
                               double gap_tol) {
  if (estimates.empty()) throw InvalidInput("pooled antimean of zero groups");
  if (estimates.size() != sizes.size()) throw InvalidInput("pooled antimean: one size per group required");
  const std::size_t q = estimates.front().q();
  const std::size_t k = estimates.front().dim() + 1;
  std::size_t total = 0;
  for (std::size_t a = 0; a < estimates.size(); ++a) {
    if (estimates[a].q() != q || estimates[a].dim() + 1 != k) throw ShapeMismatch("pooled antimean: groups differ in (q, m)");
    if (sizes[a] == 0) throw InvalidInput("pooled antimean: group sizes must be positive");
    total += sizes[a];
  }

  PooledAntimean out{estimates.front().antimean, Vector(estimates.size()), {}, {}};
  for (std::size_t a = 0; a < estimates.size(); ++a)
    out.weights[a] = static_cast<double>(sizes[a]) / static_cast<double>(total);

  out.axial.moments.assign(q, Matrix(k, k));
  for (std::size_t a = 0; a < estimates.size(); ++a)
    for (std::size_t s = 0; s < q; ++s) out.axial.moments[s] += out.weights[a] * estimates[a].axial.moments[s];

  std::vector<ProjectivePoint> components;
  for (std::size_t s = 0; s < q; ++s) {
    out.axial.eigen.push_back(eigh_sym(out.axial.moments[s]));
    require_nonfocal(out.axial.eigen[s], out.axial.moments[s], s, gap_tol);
    components.push_back(canonicalize(out.axial.eigen[s].vector(0)));
  }
  out.antimean = ProjectiveShape(std::move(components));
  out.tangent_basis = tangent_basis(out.axial.eigen);
  return out;
}

}  // namespace antimean
