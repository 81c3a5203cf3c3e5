#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "antimean/bootstrap.hpp"
#include "antimean/inference.hpp"

namespace antimean {

// One unordered pair (first < second, 0-based group indices). Exactly one of
// `result` / `error` is set; a failed pair never aborts the table.
struct PairwiseEntry {
  std::size_t first = 0;
  std::size_t second = 0;
  std::optional<TestResult> result;
  std::string error;
};

// Test run on each pair.
enum class PairwiseMethod {
  // two_sample_test / bootstrap_two_sample.
  kTwoSample,
  // Anti-MANOVA restricted to the pair (pooled eigensystem of the two groups).
  kManova,
};

std::string_view to_string(PairwiseMethod method);
// "two-sample" or "manova".
PairwiseMethod parse_pairwise_method(std::string_view text);

// Tests on all g(g-1)/2 pairs, in lexicographic pair order. With bootstrap
// calibration pair k uses seed plan.seed + k.
std::vector<PairwiseEntry> pairwise_manova(std::span<const Sample> samples, double alpha, Calibration calibration,
                                           const BootstrapPlan& plan = {}, double gap_tol = kDefaultGapTol,
                                           PairwiseMethod method = PairwiseMethod::kTwoSample,
                                           DfMode df_mode = DfMode::kDim);

}  // namespace antimean
