#include "antimean/inference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "antimean/errors.hpp"
#include "antimean/numerics.hpp"

namespace antimean {

std::string_view to_string(Calibration c) { return c == Calibration::kAsymptotic ? "asymptotic" : "bootstrap"; }

std::string_view to_string(DfMode mode) {
  switch (mode) {
    case DfMode::kDim:
      return "3q";
    case DfMode::kGroupsTimesDim:
      return "g3q";
    case DfMode::kGroupsMinusOneTimesDim:
      return "gminus1";
  }
  return "3q";
}

DfMode parse_df_mode(std::string_view text) {
  if (text == "3q") return DfMode::kDim;
  if (text == "g3q") return DfMode::kGroupsTimesDim;
  if (text == "gminus1") return DfMode::kGroupsMinusOneTimesDim;
  throw InvalidInput("unknown df mode '" + std::string(text) + "' (expected 3q, g3q or gminus1)");
}

int manova_df(DfMode mode, std::size_t manifold_dim, std::size_t groups) {
  switch (mode) {
    case DfMode::kDim:
      return static_cast<int>(manifold_dim);
    case DfMode::kGroupsTimesDim:
      return static_cast<int>(groups * manifold_dim);
    case DfMode::kGroupsMinusOneTimesDim:
      return static_cast<int>((groups == 0 ? 0 : groups - 1) * manifold_dim);
  }
  return static_cast<int>(manifold_dim);
}

double inverse_quadratic_form(const Matrix& s, std::span<const double> v) {
  if (s.rows() != v.size()) throw InvalidInput("quadratic form: size mismatch");
  if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) return 0.0;
  const EigenDecomp eig = eigh_sym(s);
  const double largest = eig.values.back();
  const double smallest = eig.values.front();
  if (!(largest > 0.0) || !(smallest > 1e-10 * largest))
    throw SingularCovarianceError("covariance matrix is singular (eigenvalue ratio " +
                                  std::to_string(largest > 0.0 ? smallest / largest : 0.0) + ")");
  double total = 0.0;
  for (std::size_t k = 0; k < eig.size(); ++k) {
    double proj = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) proj += eig.vectors(i, k) * v[i];
    total += proj * proj / eig.values[k];
  }
  return total;
}

TestResult asymptotic_result(double statistic, int df, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
  TestResult r;
  r.statistic = statistic;
  r.df = df;
  r.alpha = alpha;
  r.method = Calibration::kAsymptotic;
  if (df <= 0) {
    r.p_value = 1.0;
    r.cutoff = 0.0;
    r.reject = false;
    return r;
  }
  r.p_value = chisq_sf(statistic, df);
  r.cutoff = chisq_quantile(1.0 - alpha, df);
  r.reject = statistic > r.cutoff;
  return r;
}

double one_sample_statistic(const AntimeanEstimate& est, const ProjectiveShape& nu) {
  const Vector v = tangent_coords(est, nu);
  return static_cast<double>(est.n) * inverse_quadratic_form(est.anticov, v);
}

TestResult one_sample_test(const AntimeanEstimate& est, const ProjectiveShape& nu, double alpha) {
  return asymptotic_result(one_sample_statistic(est, nu), static_cast<int>(est.q() * est.dim()), alpha);
}

namespace {

// The antimean of `est` moved by tangent coordinates u in its basis D.
ProjectiveShape perturbed_antimean(const AntimeanEstimate& est, std::span<const double> u) {
  const std::size_t m = est.dim();
  std::vector<ProjectivePoint> out;
  out.reserve(est.q());
  for (std::size_t s = 0; s < est.q(); ++s) {
    Vector x = est.antimean[s].coords();
    const Matrix& d = est.tangent_basis[s];
    for (std::size_t r = 0; r <= m; ++r)
      for (std::size_t c = 0; c < m; ++c) x[r] += d(r, c) * u[s * m + c];
    out.push_back(canonicalize(x));
  }
  return ProjectiveShape(std::move(out));
}

Vector chart_difference(const ProjectiveShape& first, const ProjectiveShape& second) {
  return shape_log_chart(shape_group_op(second, first, /*invert_first=*/true));
}

// Jacobian of u -> chart_difference(.) where group `which` (0 or 1) is perturbed.
Matrix chart_jacobian(const AntimeanEstimate& est1, const AntimeanEstimate& est2, int which) {
  constexpr double kStep = 1e-6;
  const std::size_t dim = est1.q() * 3;
  Matrix jac(dim, dim);
  Vector u(dim, 0.0);
  for (std::size_t k = 0; k < dim; ++k) {
    u[k] = kStep;
    const Vector plus = which == 0 ? chart_difference(perturbed_antimean(est1, u), est2.antimean)
                                   : chart_difference(est1.antimean, perturbed_antimean(est2, u));
    u[k] = -kStep;
    const Vector minus = which == 0 ? chart_difference(perturbed_antimean(est1, u), est2.antimean)
                                    : chart_difference(est1.antimean, perturbed_antimean(est2, u));
    u[k] = 0.0;
    for (std::size_t i = 0; i < dim; ++i) jac(i, k) = (plus[i] - minus[i]) / (2.0 * kStep);
  }
  return jac;
}

}  // namespace

TwoSampleStatistic two_sample_statistic(const AntimeanEstimate& est1, const AntimeanEstimate& est2) {
  if (est1.q() != est2.q()) throw ShapeMismatch("two-sample test: groups differ in q");
  if (est1.dim() != 3 || est2.dim() != 3) throw ShapeMismatch("two-sample test is defined on (RP^3)^q only");

  const double n1 = static_cast<double>(est1.n);
  const double n2 = static_cast<double>(est2.n);
  const double n_total = n1 + n2;

  TwoSampleStatistic out;
  out.av = chart_difference(est1.antimean, est2.antimean);
  for (double& x : out.av) x *= std::sqrt(n_total);

  const Matrix j1 = chart_jacobian(est1, est2, 0);
  const Matrix j2 = chart_jacobian(est1, est2, 1);
  out.covariance = (n_total / n1) * (j1 * est1.anticov * j1.transpose()) +
                   (n_total / n2) * (j2 * est2.anticov * j2.transpose());
  // Symmetrize away rounding from the triple products.
  for (std::size_t i = 0; i < out.covariance.rows(); ++i)
    for (std::size_t j = i + 1; j < out.covariance.cols(); ++j) {
      const double avg = 0.5 * (out.covariance(i, j) + out.covariance(j, i));
      out.covariance(i, j) = avg;
      out.covariance(j, i) = avg;
    }
  out.scalar = inverse_quadratic_form(out.covariance, out.av);
  return out;
}

TestResult two_sample_test(const AntimeanEstimate& est1, const AntimeanEstimate& est2, double alpha) {
  const TwoSampleStatistic stat = two_sample_statistic(est1, est2);
  return asymptotic_result(stat.scalar, static_cast<int>(stat.av.size()), alpha);
}

ManovaStatistic manova_statistic(std::span<const Sample> samples, const ManovaBase& base, double gap_tol) {
  if (samples.empty()) throw InvalidInput("anti-MANOVA needs at least one group");
  std::vector<AntimeanEstimate> groups;
  std::vector<std::size_t> sizes;
  groups.reserve(samples.size());
  for (const auto& sample : samples) {
    groups.push_back(sample_antimean(sample, gap_tol));
    sizes.push_back(sample.size());
  }
  for (const auto& est : groups)
    if (est.q() != groups.front().q() || est.dim() != groups.front().dim())
      throw ShapeMismatch("anti-MANOVA: groups differ in (q, m)");
  PooledAntimean pooled = pooled_antimean(groups, sizes, gap_tol);

  Vector contributions(samples.size(), 0.0);
  double value = 0.0;
  for (std::size_t a = 0; a < samples.size(); ++a) {
    if (base.external) {
      contributions[a] = one_sample_statistic(groups[a], *base.external);
    } else {
      const Vector v = tangent_coords(pooled, groups[a].antimean);
      const Matrix anticov = anticovariance_vw(samples[a], pooled.axial, gap_tol);
      contributions[a] = static_cast<double>(samples[a].size()) * inverse_quadratic_form(anticov, v);
    }
    value += contributions[a];
  }
  return ManovaStatistic{value, std::move(contributions), std::move(groups), std::move(pooled)};
}

TestResult manova_test(std::span<const Sample> samples, double alpha, DfMode df_mode, double gap_tol) {
  const ManovaStatistic stat = manova_statistic(samples, ManovaBase::pooled_sample(), gap_tol);
  const std::size_t d = stat.pooled.antimean.q() * stat.pooled.antimean.dim();
  return asymptotic_result(stat.value, manova_df(df_mode, d, samples.size()), alpha);
}

}  // namespace antimean
