#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "antimean/inference.hpp"
#include "antimean/rng.hpp"

namespace antimean {

enum class FailurePolicy {
  // Resamples whose antimean or anticovariance is undefined are dropped and
  // counted; surviving values are untouched.
  kSkipAndCount,
  kAbort,
};

// Which anticovariance normalizes each bootstrap replicate.
enum class Studentization {
  // aS* recomputed from every resample (bootstrap-t). Needs resamples with at
  // least q*m distinct observations per group.
  kResample,
  // The original sample's anticovariance is reused for every replicate. Works
  // for very small groups; loses the pivotal refinement.
  kOriginal,
};

std::string_view to_string(Studentization s);
Studentization parse_studentization(std::string_view text);

struct BootstrapPlan {
  std::size_t resamples = 1000;
  std::uint64_t seed = 0;
  FailurePolicy failure_policy = FailurePolicy::kSkipAndCount;
  Studentization studentization = Studentization::kResample;
  // Worker threads; 0 picks the hardware concurrency. Results do not depend
  // on this value.
  unsigned threads = 1;
};

struct BootstrapResult {
  Vector values;
  double observed = 0.0;
  double cutoff = 0.0;
  std::size_t n_failed = 0;
  double empirical_p = 1.0;
};

// Ascending order statistic of rank ceil(confidence * |values|) (1-indexed).
double bootstrap_cutoff(std::span<const double> values, double confidence);
// (1 + #{values >= observed}) / (|values| + 1).
double bootstrap_empirical_p(std::span<const double> values, double observed);

// Draws sample.size() observations with replacement.
Sample resample(std::span<const ProjectiveShape> sample, Rng& rng);

// Bootstrap law of n ||aS*^{-1/2} tan(antimean - antimean*)||^2, i.e. the
// one-sample statistic of each resample evaluated at the original sample
// antimean. `observed` is the statistic at `null_value` when supplied (0
// otherwise); empirical_p refers to it.
BootstrapResult bootstrap_one_sample(std::span<const ProjectiveShape> sample, const BootstrapPlan& plan,
                                     double confidence, const std::optional<ProjectiveShape>& null_value = std::nullopt,
                                     double gap_tol = kDefaultGapTol);

// Pivotal bootstrap of the two-sample statistic: each resample contributes
// (aV* - aV)^T cov*^{-1} (aV* - aV). `observed` is aV^T cov^{-1} aV.
BootstrapResult bootstrap_two_sample(std::span<const ProjectiveShape> sample1, std::span<const ProjectiveShape> sample2,
                                     const BootstrapPlan& plan, double confidence, double gap_tol = kDefaultGapTol);

// Null-imposing bootstrap of the anti-MANOVA statistic T_d. Each group is
// rotated axially (minimal rotation) so that its sample antimean coincides
// with the original pooled sample antimean; resamples are drawn from the
// rotated groups and T_d is recomputed on each with the resample's own
// pooled eigensystem and anticovariances.
BootstrapResult bootstrap_manova(std::span<const Sample> samples, const BootstrapPlan& plan, double confidence,
                                 double gap_tol = kDefaultGapTol);

// Bootstrap-calibrated TestResult: cutoff at confidence 1 - alpha,
// p = empirical_p, reject iff observed > cutoff.
TestResult bootstrap_test_result(const BootstrapResult& boot, int df, double alpha);

// Minimal rotation of R^k taking unit `from` to unit `to` (requires
// from . to > -1).
Matrix minimal_rotation(std::span<const double> from, std::span<const double> to);

}  // namespace antimean
