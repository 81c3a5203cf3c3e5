#include "antimean/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <thread>

#include "antimean/errors.hpp"

namespace antimean {

std::string_view to_string(CalibrationKind kind) {
  switch (kind) {
    case CalibrationKind::kOneSampleAsymptotic: return "one-sample";
    case CalibrationKind::kTwoSampleAsymptotic: return "two-sample";
    case CalibrationKind::kManovaAsymptotic: return "manova";
    case CalibrationKind::kOneSampleCoverage: return "coverage";
    case CalibrationKind::kTwoSampleBootstrap: return "two-sample-boot";
    case CalibrationKind::kManovaBootstrap: return "manova-boot";
  }
  return "unknown";
}

CalibrationKind parse_calibration_kind(std::string_view text) {
  for (auto kind : {CalibrationKind::kOneSampleAsymptotic, CalibrationKind::kTwoSampleAsymptotic,
                    CalibrationKind::kManovaAsymptotic, CalibrationKind::kOneSampleCoverage,
                    CalibrationKind::kTwoSampleBootstrap, CalibrationKind::kManovaBootstrap})
    if (to_string(kind) == text) return kind;
  throw InvalidInput("unknown calibration kind '" + std::string(text) + "'");
}

namespace {

std::size_t required_groups(CalibrationKind kind, std::size_t given) {
  switch (kind) {
    case CalibrationKind::kOneSampleAsymptotic:
    case CalibrationKind::kOneSampleCoverage: return 1;
    case CalibrationKind::kTwoSampleAsymptotic:
    case CalibrationKind::kTwoSampleBootstrap: return 2;
    default: return given;
  }
}

void validate(const CalibrationPlan& plan) {
  const std::size_t g = plan.group_sizes.size();
  if (g == 0) throw InvalidInput("calibration needs at least one group size");
  if (required_groups(plan.kind, g) != g)
    throw InvalidInput("calibration kind '" + std::string(to_string(plan.kind)) + "' needs " +
                       std::to_string(required_groups(plan.kind, g)) + " group(s)");
  if ((plan.kind == CalibrationKind::kManovaAsymptotic || plan.kind == CalibrationKind::kManovaBootstrap) && g < 2)
    throw InvalidInput("anti-MANOVA calibration needs at least two groups");
  if (plan.centers.size() != 1 && plan.centers.size() != g)
    throw InvalidInput("calibration needs one centre or one per group");
  if (plan.replications == 0) throw InvalidInput("calibration needs at least one replication");
  if (!(plan.alpha > 0.0 && plan.alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
  for (std::size_t n : plan.group_sizes)
    if (n == 0) throw InvalidInput("group sizes must be positive");
}

struct Replication {
  std::optional<double> statistic;
  bool hit = false;
  std::string error;
};

Replication run_one(const CalibrationPlan& plan, std::size_t r) {
  const std::size_t g = plan.group_sizes.size();
  const std::uint64_t key = Rng(RngStream{plan.seed, r}).next_u64();
  std::vector<Sample> groups;
  groups.reserve(g);
  for (std::size_t a = 0; a < g; ++a) {
    const ProjectiveShape& centre = plan.centers.size() == 1 ? plan.centers[0] : plan.centers[a];
    groups.push_back(synth_sample(SynthSpec{centre, plan.concentration, plan.spread, plan.group_sizes[a], key + a}));
  }
  BootstrapPlan boot = plan.bootstrap;
  boot.seed = key + g;

  Replication out;
  try {
    switch (plan.kind) {
      case CalibrationKind::kOneSampleAsymptotic: {
        const ProjectiveShape truth =
            synth_population_antimean(SynthSpec{plan.centers[0], plan.concentration, plan.spread, 1, 0});
        const TestResult t = one_sample_test(sample_antimean(groups[0], plan.gap_tol), truth, plan.alpha);
        out.statistic = t.statistic;
        out.hit = t.reject;
        break;
      }
      case CalibrationKind::kTwoSampleAsymptotic: {
        const TestResult t = two_sample_test(sample_antimean(groups[0], plan.gap_tol),
                                             sample_antimean(groups[1], plan.gap_tol), plan.alpha);
        out.statistic = t.statistic;
        out.hit = t.reject;
        break;
      }
      case CalibrationKind::kManovaAsymptotic: {
        const TestResult t = manova_test(groups, plan.alpha, plan.df_mode, plan.gap_tol);
        out.statistic = t.statistic;
        out.hit = t.reject;
        break;
      }
      case CalibrationKind::kOneSampleCoverage: {
        const ProjectiveShape truth =
            synth_population_antimean(SynthSpec{plan.centers[0], plan.concentration, plan.spread, 1, 0});
        const BootstrapResult b = bootstrap_one_sample(groups[0], boot, 1.0 - plan.alpha, truth, plan.gap_tol);
        out.statistic = b.observed;
        out.hit = b.observed <= b.cutoff;
        break;
      }
      case CalibrationKind::kTwoSampleBootstrap: {
        const BootstrapResult b = bootstrap_two_sample(groups[0], groups[1], boot, 1.0 - plan.alpha, plan.gap_tol);
        out.statistic = b.observed;
        out.hit = b.observed > b.cutoff;
        break;
      }
      case CalibrationKind::kManovaBootstrap: {
        const BootstrapResult b = bootstrap_manova(groups, boot, 1.0 - plan.alpha, plan.gap_tol);
        out.statistic = b.observed;
        out.hit = b.observed > b.cutoff;
        break;
      }
    }
  } catch (const Error& e) {
    out.statistic.reset();
    out.error = e.what();
  }
  return out;
}

int calibration_df(const CalibrationPlan& plan) {
  const std::size_t d = plan.centers[0].q() * plan.centers[0].dim();
  switch (plan.kind) {
    case CalibrationKind::kManovaAsymptotic:
    case CalibrationKind::kManovaBootstrap: return manova_df(plan.df_mode, d, plan.group_sizes.size());
    default: return static_cast<int>(d);
  }
}

}  // namespace

CalibrationSummary calibrate(const CalibrationPlan& plan) {
  validate(plan);
  std::vector<Replication> reps(plan.replications);
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t r = first; r < plan.replications; r += stride) reps[r] = run_one(plan, r);
  };
  unsigned threads = plan.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : plan.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, plan.replications));
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }

  CalibrationSummary s;
  s.replications = plan.replications;
  s.df = calibration_df(plan);
  for (const auto& r : reps) {
    if (!r.statistic) {
      if (s.first_error.empty()) s.first_error = r.error;
      ++s.failed;
      continue;
    }
    ++s.completed;
    s.statistics.push_back(*r.statistic);
    if (r.hit) ++s.hits;
  }
  if (s.completed > 0) {
    const double n = static_cast<double>(s.completed);
    s.rate = static_cast<double>(s.hits) / n;
    s.std_error = std::sqrt(s.rate * (1.0 - s.rate) / n);
    s.statistic_q95 = bootstrap_cutoff(s.statistics, 0.95);
  }
  return s;
}

}  // namespace antimean
