#include "antimean/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "antimean/errors.hpp"

namespace antimean {

std::size_t sign_anchor(std::span<const double> v) {
  double maxabs = 0.0;
  for (double x : v) maxabs = std::max(maxabs, std::abs(x));
  const double threshold = maxabs * (1.0 - 1e-12);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) >= threshold) return i;
  return 0;
}

void canonicalize_sign(std::span<double> v) {
  if (v.empty()) return;
  if (v[sign_anchor(v)] < 0.0)
    for (double& x : v) x = -x;
}

namespace {

void check_symmetric(const Matrix& a) {
  if (!a.is_square() || a.rows() == 0) throw InvalidInput("eigh_sym: matrix must be square and non-empty");
  for (double v : a.data())
    if (!std::isfinite(v)) throw InvalidInput("eigh_sym: non-finite entry");
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      const double tol = 1e-12 * std::max(1.0, std::abs(a(i, j)));
      if (std::abs(a(i, j) - a(j, i)) > tol) throw InvalidInput("eigh_sym: matrix is not symmetric");
    }
}

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

EigenDecomp eigh_sym(const Matrix& input) {
  check_symmetric(input);
  const std::size_t n = input.rows();

  // Work on the exactly symmetrized copy.
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (input(i, j) + input(j, i));
  Matrix v = Matrix::identity(n);

  const double scale = a.frobenius_norm();
  const double target = 1e-12 * scale;
  constexpr int kMaxSweeps = 100;

  for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm(a) > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  EigenDecomp out{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    Vector col = v.column(order[k]);
    canonicalize_sign(col);
    out.vectors.set_column(k, col);
  }
  return out;
}

namespace {

constexpr int kGammaMaxIter = 10000;
constexpr double kGammaEps = 1e-16;

double gamma_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < kGammaMaxIter; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kGammaEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double gamma_continued_fraction(double a, double x) {
  constexpr double kTiny = std::numeric_limits<double>::min() / kGammaEps;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kGammaMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kGammaEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

void check_chisq_args(double x, int df) {
  if (df <= 0) throw InvalidInput("chi-square: degrees of freedom must be positive");
  if (!(x >= 0.0)) throw InvalidInput("chi-square: argument must be >= 0");
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) throw InvalidInput("incomplete gamma: need a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_continued_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) throw InvalidInput("incomplete gamma: need a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_series(a, x);
  return gamma_continued_fraction(a, x);
}

double chisq_cdf(double x, int df) {
  check_chisq_args(x, df);
  return std::clamp(regularized_gamma_p(0.5 * df, 0.5 * x), 0.0, 1.0);
}

double chisq_sf(double x, int df) {
  check_chisq_args(x, df);
  return std::clamp(regularized_gamma_q(0.5 * df, 0.5 * x), 0.0, 1.0);
}

namespace {

double chisq_density(double x, int df) {
  if (x <= 0.0) return df == 2 ? 0.5 : 0.0;
  const double k = 0.5 * df;
  return std::exp((k - 1.0) * std::log(x) - 0.5 * x - k * std::log(2.0) - std::lgamma(k));
}

}  // namespace

double chisq_quantile(double p, int df) {
  if (df <= 0) throw InvalidInput("chi-square: degrees of freedom must be positive");
  if (!(p > 0.0 && p < 1.0)) throw InvalidInput("chi-square quantile: p must lie in (0, 1)");

  double lo = 0.0;
  double hi = std::max(1.0, static_cast<double>(df));
  while (chisq_cdf(hi, df) < p) {
    lo = hi;
    hi *= 2.0;
  }

  // Newton steps kept inside the bracket; bisection whenever Newton leaves it.
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = chisq_cdf(x, df) - p;
    if (f == 0.0) return x;
    if (f < 0.0)
      lo = x;
    else
      hi = x;
    const double dens = chisq_density(x, df);
    double next = dens > 0.0 ? x - f / dens : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * std::max(1.0, x) || hi - lo <= 1e-15 * std::max(1.0, hi)) return next;
    x = next;
  }
  return x;
}

}  // namespace antimean
