#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "antimean/estimation.hpp"
#include "antimean/manifold.hpp"
#include "antimean/matrix.hpp"

namespace antimean {

using Sample = std::vector<ProjectiveShape>;

enum class Calibration { kAsymptotic, kBootstrap };

std::string_view to_string(Calibration c);

struct TestResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  Calibration method = Calibration::kAsymptotic;
  double cutoff = 0.0;
  double alpha = 0.05;
  // statistic > cutoff (strict).
  bool reject = false;
};

// Degrees of freedom attached to the anti-MANOVA statistic. d = q m is the
// manifold dimension and g the number of groups.
enum class DfMode {
  kDim,                     // d
  kGroupsTimesDim,          // g d
  kGroupsMinusOneTimesDim,  // (g - 1) d
};

std::string_view to_string(DfMode mode);
// Accepts "3q", "g3q", "gminus1".
DfMode parse_df_mode(std::string_view text);
int manova_df(DfMode mode, std::size_t manifold_dim, std::size_t groups);

// v^T S^{-1} v through the eigensystem of S. Returns 0 for an exactly zero v;
// otherwise throws SingularCovarianceError when the smallest eigenvalue of S is
// not above 1e-10 times the largest.
double inverse_quadratic_form(const Matrix& s, std::span<const double> v);

// chi-square calibration: p = P(chi2_df > statistic), cutoff = chi2_{df, 1-alpha}.
TestResult asymptotic_result(double statistic, int df, double alpha);

// n v^T aS^{-1} v with v = tangent_coords(est, nu).
double one_sample_statistic(const AntimeanEstimate& est, const ProjectiveShape& nu);
TestResult one_sample_test(const AntimeanEstimate& est, const ProjectiveShape& nu, double alpha);

// aV = sqrt(n1 + n2) * phi(antimean2^{-1} (.) antimean1) in R^{3q}, its plug-in
// covariance and the quadratic form aV^T cov^{-1} aV.
//
// cov = sum_a (n+ / n_a) J_a aS_a J_a^T, where J_a is the Jacobian of aV / sqrt(n+)
// with respect to the tangent coordinates of group a's antimean in its basis
// D_a (central differences).
struct TwoSampleStatistic {
  Vector av;
  Matrix covariance;
  double scalar = 0.0;
};

TwoSampleStatistic two_sample_statistic(const AntimeanEstimate& est1, const AntimeanEstimate& est2);
TestResult two_sample_test(const AntimeanEstimate& est1, const AntimeanEstimate& est2, double alpha);

// Where the anti-MANOVA statistic is centered.
struct ManovaBase {
  // Empty: pooled sample antimean with pooled tangent basis and the pooled
  // anticovariances aS_a. Set: sum_a of one_sample_statistic(group a, point).
  std::optional<ProjectiveShape> external;

  static ManovaBase pooled_sample() { return {}; }
  static ManovaBase at(ProjectiveShape point) { return {std::move(point)}; }
};

struct ManovaStatistic {
  double value = 0.0;
  Vector contributions;
  std::vector<AntimeanEstimate> groups;
  PooledAntimean pooled;
};

// T_d = sum_a n_a v_a^T aS_a^{-1} v_a with v_a = D^T (pooled - group a antimean)
// blockwise and aS_a the anticovariance of group a's observations w.r.t. the
// pooled eigensystem.
ManovaStatistic manova_statistic(std::span<const Sample> samples, const ManovaBase& base = ManovaBase::pooled_sample(),
                                 double gap_tol = kDefaultGapTol);
TestResult manova_test(std::span<const Sample> samples, double alpha, DfMode df_mode = DfMode::kDim,
                       double gap_tol = kDefaultGapTol);

}  // namespace antimean
