#include "antimean/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <string>
#include <thread>

#include "antimean/errors.hpp"

namespace antimean {

std::string_view to_string(Studentization s) {
  return s == Studentization::kResample ? "resample" : "original";
}

Studentization parse_studentization(std::string_view text) {
  if (text == "resample") return Studentization::kResample;
  if (text == "original") return Studentization::kOriginal;
  throw InvalidInput("unknown studentization '" + std::string(text) + "' (expected resample or original)");
}

double bootstrap_cutoff(std::span<const double> values, double confidence) {
  if (values.empty()) throw InvalidInput("bootstrap cutoff of an empty value list");
  if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidInput("bootstrap confidence must lie in (0, 1)");
  Vector sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  // The small slack keeps e.g. 0.95 * 400 from rounding up to rank 381.
  auto rank = static_cast<std::size_t>(std::ceil(confidence * static_cast<double>(sorted.size()) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

double bootstrap_empirical_p(std::span<const double> values, double observed) {
  const auto exceed = std::count_if(values.begin(), values.end(), [&](double v) { return v >= observed; });
  return (1.0 + static_cast<double>(exceed)) / (static_cast<double>(values.size()) + 1.0);
}

Sample resample(std::span<const ProjectiveShape> sample, Rng& rng) {
  Sample out;
  out.reserve(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) out.push_back(sample[rng.index(sample.size())]);
  return out;
}

namespace {

struct Outcome {
  std::optional<double> value;
  std::exception_ptr error;
};

// Evaluates `statistic` on B independent streams RngStream(seed, b) and merges
// the outcomes in index order.
BootstrapResult run_resamples(const BootstrapPlan& plan, const std::function<double(Rng&)>& statistic) {
  if (plan.resamples == 0) throw InvalidInput("bootstrap plan needs at least one resample");
  std::vector<Outcome> outcomes(plan.resamples);

  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t b = first; b < plan.resamples; b += stride) {
      Rng rng(RngStream{plan.seed, b});
      try {
        outcomes[b].value = statistic(rng);
      } catch (const Error&) {
        outcomes[b].error = std::current_exception();
      }
    }
  };

  unsigned threads = plan.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : plan.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, plan.resamples));
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }

  BootstrapResult out;
  out.values.reserve(plan.resamples);
  for (auto& o : outcomes) {
    if (o.value) {
      out.values.push_back(*o.value);
    } else {
      if (plan.failure_policy == FailurePolicy::kAbort) std::rethrow_exception(o.error);
      ++out.n_failed;
    }
  }
  if (out.values.empty()) throw BootstrapDegenerateError("every bootstrap resample failed");
  return out;
}

void finish(BootstrapResult& result, double confidence) {
  result.cutoff = bootstrap_cutoff(result.values, confidence);
  result.empirical_p = bootstrap_empirical_p(result.values, result.observed);
}

}  // namespace

BootstrapResult bootstrap_one_sample(std::span<const ProjectiveShape> sample, const BootstrapPlan& plan,
                                     double confidence, const std::optional<ProjectiveShape>& null_value,
                                     double gap_tol) {
  const AntimeanEstimate est = sample_antimean(sample, gap_tol);
  BootstrapResult out = run_resamples(plan, [&](Rng& rng) {
    const Sample star = resample(sample, rng);
    const AntimeanEstimate est_star = sample_antimean(star, gap_tol);
    if (plan.studentization == Studentization::kResample) return one_sample_statistic(est_star, est.antimean);
    const Vector v = tangent_coords(est, est_star.antimean);
    return static_cast<double>(est.n) * inverse_quadratic_form(est.anticov, v);
  });
  out.observed = null_value ? one_sample_statistic(est, *null_value) : 0.0;
  finish(out, confidence);
  return out;
}

BootstrapResult bootstrap_two_sample(std::span<const ProjectiveShape> sample1, std::span<const ProjectiveShape> sample2,
                                     const BootstrapPlan& plan, double confidence, double gap_tol) {
  const AntimeanEstimate est1 = sample_antimean(sample1, gap_tol);
  const AntimeanEstimate est2 = sample_antimean(sample2, gap_tol);
  const TwoSampleStatistic observed = two_sample_statistic(est1, est2);

  BootstrapResult out = run_resamples(plan, [&](Rng& rng) {
    const Sample star1 = resample(sample1, rng);
    const Sample star2 = resample(sample2, rng);
    const TwoSampleStatistic s = two_sample_statistic(sample_antimean(star1, gap_tol), sample_antimean(star2, gap_tol));
    Vector centered = s.av;
    for (std::size_t i = 0; i < centered.size(); ++i) centered[i] -= observed.av[i];
    const Matrix& cov = plan.studentization == Studentization::kResample ? s.covariance : observed.covariance;
    return inverse_quadratic_form(cov, centered);
  });
  out.observed = observed.scalar;
  finish(out, confidence);
  return out;
}

Matrix minimal_rotation(std::span<const double> from, std::span<const double> to) {
  const std::size_t k = from.size();
  if (to.size() != k) throw InvalidInput("minimal rotation: dimension mismatch");
  const double c = dot(from, to);
  if (!(c > -1.0 + 1e-12)) throw InvalidInput("minimal rotation: antipodal vectors");
  // R = I + K + K^2 / (1 + c) with K = to from^T - from to^T.
  Matrix kmat = outer(to, from) - outer(from, to);
  return Matrix::identity(k) + kmat + (1.0 / (1.0 + c)) * (kmat * kmat);
}

BootstrapResult bootstrap_manova(std::span<const Sample> samples, const BootstrapPlan& plan, double confidence,
                                 double gap_tol) {
  const ManovaStatistic observed = manova_statistic(samples, ManovaBase::pooled_sample(), gap_tol);
  const std::size_t q = observed.pooled.antimean.q();

  // Move every group so that its antimean sits on the pooled antimean.
  std::vector<Sample> centered;
  centered.reserve(samples.size());
  for (std::size_t a = 0; a < samples.size(); ++a) {
    std::vector<Matrix> rotations;
    for (std::size_t s = 0; s < q; ++s) {
      Vector from = observed.groups[a].antimean[s].coords();
      const Vector& to = observed.pooled.antimean[s].coords();
      if (dot(from, to) < 0.0)
        for (double& x : from) x = -x;
      rotations.push_back(minimal_rotation(from, to));
    }
    Sample moved;
    moved.reserve(samples[a].size());
    for (const auto& shape : samples[a]) {
      std::vector<ProjectivePoint> comps;
      comps.reserve(q);
      for (std::size_t s = 0; s < q; ++s) comps.push_back(canonicalize(rotations[s] * shape[s].coords()));
      moved.emplace_back(std::move(comps));
    }
    centered.push_back(std::move(moved));
  }

  // For kOriginal: the observed statistic's anticovariances (group data in
  // the original pooled eigensystem) and replicates expressed in the original
  // pooled tangent frame. Moved groups cannot supply these: their own antimean
  // is the pooled one, which centres every w and costs a rank.
  const bool original = plan.studentization == Studentization::kOriginal;
  std::vector<Matrix> original_anticov;
  if (original)
    for (const auto& group : samples) original_anticov.push_back(anticovariance_vw(group, observed.pooled.axial, gap_tol));

  BootstrapResult out = run_resamples(plan, [&](Rng& rng) {
    std::vector<Sample> star;
    star.reserve(centered.size());
    for (const auto& group : centered) star.push_back(resample(group, rng));
    if (!original) return manova_statistic(star, ManovaBase::pooled_sample(), gap_tol).value;

    std::vector<AntimeanEstimate> est;
    std::vector<std::size_t> sizes;
    for (const auto& group : star) {
      est.push_back(sample_antimean(group, gap_tol));
      sizes.push_back(group.size());
    }
    const PooledAntimean pooled_star = pooled_antimean(est, sizes, gap_tol);
    const auto& frame = observed.pooled;
    const Vector centre = tangent_coords(frame.antimean, frame.tangent_basis, pooled_star.antimean);
    double total = 0.0;
    for (std::size_t a = 0; a < star.size(); ++a) {
      Vector v = tangent_coords(frame.antimean, frame.tangent_basis, est[a].antimean);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= centre[i];
      total += static_cast<double>(star[a].size()) * inverse_quadratic_form(original_anticov[a], v);
    }
    return total;
  });
  out.observed = observed.value;
  finish(out, confidence);
  return out;
}

TestResult bootstrap_test_result(const BootstrapResult& boot, int df, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
  TestResult r;
  r.statistic = boot.observed;
  r.df = df;
  r.alpha = alpha;
  r.method = Calibration::kBootstrap;
  r.cutoff = bootstrap_cutoff(boot.values, 1.0 - alpha);
  r.p_value = boot.empirical_p;
  r.reject = boot.observed > r.cutoff;
  return r;
}

}  // namespace antimean
