#pragma once

// Real special functions used by every constant in the library.

namespace nlt::specfun {

/// Gamma function for s > 0. Throws DomainError otherwise.
double gamma(double s);

/// log Gamma(s) for s > 0.
double log_gamma(double s);

/// The partial product k^s k! / (s(s+1)...(s+k)), evaluated in log space.
/// Converges to gamma(s) as k grows, with error O(1/k).
double gamma_limit_partial(double s, long long k);

/// Beta function B(p, q) = Gamma(p)Gamma(q)/Gamma(p+q) for p, q > 0.
double beta(double p, double q);

/// Rising factorial (x)_k. Products of more than 50 factors with x > 0 are
/// evaluated through log Gamma to avoid overflow.
double pochhammer(double x, long long k);

/// log (x)_k for x > 0.
double log_pochhammer(double x, long long k);

/// Surface area of the unit sphere S^{n-1} in R^n, 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

/// Exponential integral E1(x) = int_x^inf e^{-t}/t dt for x > 0.
double expint_e1(double x);

}  // namespace nlt::specfun
