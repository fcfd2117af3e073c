#pragma once

#include <functional>
#include <span>
#include <vector>

namespace nlt::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;      ///< estimated absolute error
    int evaluations = 0;
    bool converged = true;
};

struct Tolerance {
    double abs = 1e-14;
    double rel = 1e-12;
    int max_intervals = 4000;
    /// Also stop once the error is below l1_rel times the sum of |panel integrals|;
    /// keeps sign-changing integrands with small net value from stalling.
    double l1_rel = 0.0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 15-point Gauss-Kronrod quadrature on [a, b]. Interior
/// breakpoints (unsorted, possibly outside [a, b]) seed the initial partition.
Result integrate(const Integrand& f, double a, double b, const Tolerance& tol = {},
                 std::span<const double> breakpoints = {});

/// Same as integrate() but throws ConvergenceError when the tolerance is not met.
Result integrate_checked(const Integrand& f, double a, double b, const Tolerance& tol,
                         std::span<const double> breakpoints, const char* context);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached n-point Gauss-Legendre rule.
const GaussLegendre& gauss_legendre(int n);

/// Fixed-order composite Gauss-Legendre sum of f over [a, b].
double fixed_gauss(const Integrand& f, double a, double b, int order);

}  // namespace nlt::quad
