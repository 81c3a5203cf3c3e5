#pragma once

#include <cstddef>

#include "antimean/matrix.hpp"

namespace antimean {

// Eigensystem of a real symmetric matrix.
//
// values are ascending; column k of `vectors` is the unit eigenvector paired
// with values[k]. Each eigenvector is sign-canonicalized so that its
// largest-magnitude component is positive (lowest index wins ties).
struct EigenDecomp {
  Vector values;
  Matrix vectors;

  std::size_t size() const noexcept { return values.size(); }
  Vector vector(std::size_t k) const { return vectors.column(k); }
};

// Cyclic Jacobi eigensolver. Converges when the off-diagonal Frobenius mass
// drops below 1e-12 * ||A||_F (at most 100 sweeps). Throws InvalidInput on
// non-finite entries or asymmetry beyond 1e-12 * max(1, |a_ij|).
EigenDecomp eigh_sym(const Matrix& a);

// Index of the sign-canonical component: the first entry whose magnitude is
// within a relative 1e-12 of the largest magnitude.
std::size_t sign_anchor(std::span<const double> v);

// Flips v in place so that v[sign_anchor(v)] > 0.
void canonicalize_sign(std::span<double> v);

// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);
// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed directly.
double regularized_gamma_q(double a, double x);

double chisq_cdf(double x, int df);
// Upper tail 1 - chisq_cdf(x, df) without cancellation.
double chisq_sf(double x, int df);
double chisq_quantile(double p, int df);

}  // namespace antimean
