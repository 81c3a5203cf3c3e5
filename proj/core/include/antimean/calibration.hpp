#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "antimean/bootstrap.hpp"
#include "antimean/data.hpp"
#include "antimean/inference.hpp"

namespace antimean {

// Monte Carlo harness: R outer replications on synthetic data.
enum class CalibrationKind {
  kOneSampleAsymptotic,   // rejection rate of one_sample_test at the population antimean
  kTwoSampleAsymptotic,   // rejection rate of two_sample_test
  kManovaAsymptotic,      // rejection rate of manova_test
  kOneSampleCoverage,     // coverage of the population antimean by the bootstrap region
  kTwoSampleBootstrap,    // rejection rate of the bootstrap two-sample test
  kManovaBootstrap,       // rejection rate of the bootstrap anti-MANOVA test
};

std::string_view to_string(CalibrationKind kind);
// "one-sample", "two-sample", "manova", "coverage", "two-sample-boot", "manova-boot".
CalibrationKind parse_calibration_kind(std::string_view text);

struct CalibrationPlan {
  CalibrationKind kind = CalibrationKind::kOneSampleAsymptotic;
  // Either one centre shared by every group or one per group.
  std::vector<ProjectiveShape> centers;
  std::vector<std::size_t> group_sizes;
  double concentration = 20.0;
  Vector spread;
  std::size_t replications = 200;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  DfMode df_mode = DfMode::kDim;
  BootstrapPlan bootstrap{};
  // Outer replications run on this many threads (0 = hardware concurrency).
  unsigned threads = 1;
  double gap_tol = kDefaultGapTol;
};

struct CalibrationSummary {
  std::size_t replications = 0;
  std::size_t completed = 0;
  std::size_t failed = 0;
  // Rejections, or for coverage runs the replications whose region contains
  // the population antimean.
  std::size_t hits = 0;
  double rate = 0.0;
  double std_error = 0.0;
  // Observed statistic of every completed replication, in replication order.
  Vector statistics;
  double statistic_q95 = 0.0;
  int df = 0;
  std::string first_error;
};

// Replication r draws group a with seed k_r + a and bootstraps with seed
// k_r + g, where k_r is the first draw of RngStream(plan.seed, r). Summaries
// do not depend on plan.threads.
CalibrationSummary calibrate(const CalibrationPlan& plan);

}  // namespace antimean
