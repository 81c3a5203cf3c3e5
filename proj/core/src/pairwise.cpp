#include "antimean/pairwise.hpp"

#include "antimean/errors.hpp"

namespace antimean {

std::string_view to_string(PairwiseMethod method) {
  return method == PairwiseMethod::kTwoSample ? "two-sample" : "manova";
}

PairwiseMethod parse_pairwise_method(std::string_view text) {
  if (text == "two-sample") return PairwiseMethod::kTwoSample;
  if (text == "manova") return PairwiseMethod::kManova;
  throw InvalidInput("unknown pairwise method '" + std::string(text) + "' (expected two-sample or manova)");
}

namespace {

TestResult pair_test(const Sample& a, const Sample& b, double alpha, Calibration calibration, const BootstrapPlan& plan,
                     double gap_tol, PairwiseMethod method, DfMode df_mode) {
  if (method == PairwiseMethod::kTwoSample) {
    if (calibration == Calibration::kAsymptotic)
      return two_sample_test(sample_antimean(a, gap_tol), sample_antimean(b, gap_tol), alpha);
    const BootstrapResult boot = bootstrap_two_sample(a, b, plan, 1.0 - alpha, gap_tol);
    return bootstrap_test_result(boot, static_cast<int>(3 * a.front().q()), alpha);
  }
  const std::vector<Sample> pair{a, b};
  if (calibration == Calibration::kAsymptotic) return manova_test(pair, alpha, df_mode, gap_tol);
  const BootstrapResult boot = bootstrap_manova(pair, plan, 1.0 - alpha, gap_tol);
  return bootstrap_test_result(boot, manova_df(df_mode, a.front().q() * a.front().dim(), 2), alpha);
}

}  // namespace

std::vector<PairwiseEntry> pairwise_manova(std::span<const Sample> samples, double alpha, Calibration calibration,
                                           const BootstrapPlan& plan, double gap_tol, PairwiseMethod method,
                                           DfMode df_mode) {
  if (samples.size() < 2) throw InvalidInput("pairwise tests need at least two groups");
  std::vector<PairwiseEntry> out;
  std::size_t pair_index = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j, ++pair_index) {
      PairwiseEntry entry{i, j, std::nullopt, {}};
      BootstrapPlan pair_plan = plan;
      pair_plan.seed = plan.seed + pair_index;
      try {
        entry.result = pair_test(samples[i], samples[j], alpha, calibration, pair_plan, gap_tol, method, df_mode);
      } catch (const Error& e) {
        entry.error = e.what();
      }
      out.push_back(std::move(entry));
    }
  }
  return out;
}

}  // namespace antimean
