#pragma once

#include <mutex>
#include <span>
#include <vector>

namespace nlt {

/// Parameters of the angular kernel
///   g(lambda; m, beta) = int_0^pi sin^m(mu) / (1 - 2 lambda cos(mu) + lambda^2)^{m/2 + beta} dmu.
/// The transport kernel G_alpha is g with m = n, beta = alpha.
struct KernelParams {
    int m = 2;
    double beta = 0.5;

    static KernelParams for_transport(int n, double alpha) { return {n, alpha}; }
};

/// Behaviour of g at lambda = 1.
enum class SingularityClass { finite, logarithmic, power };

SingularityClass singularity_class(double beta);

/// Taylor coefficient a_{2k}(m, beta) of g around lambda = 0:
///   a_0 = B(1/2, (m+1)/2),  a_{2k} = a_0 (beta)_k (m/2+beta)_k / (k! (m/2+1)_k).
double taylor_coeff(const KernelParams& p, long long k);

/// lim_{k->inf} a_{2k} / k^{2 beta - 2} = Gamma(1/2)Gamma(m/2+1/2) / (Gamma(beta)Gamma(m/2+beta)).
double coeff_ratio_limit(const KernelParams& p);

/// Closed value g(1) = 2^{-2 beta} B(1/2 - beta, (m+1)/2), valid for beta < 1/2.
double g_at_one_closed_form(const KernelParams& p);

struct QuadPolicy {
    double abs_tol = 1e-300;
    double rel_tol = 2e-14;
    int max_intervals = 4000;
};

/// Evaluates g and its first two lambda-derivatives.
///
/// For lambda <= lambda_cut the Taylor series is summed; on (lambda_cut, 1) the
/// defining integral is integrated on panels graded geometrically toward mu = 0,
/// where the denominator is smallest; lambda > 1 maps back through
/// g(lambda) = lambda^{-(m+2 beta)} g(1/lambda).
///
/// Immutable after construction except for the coefficient cache, which grows
/// under a mutex.
class GEvaluator {
public:
    explicit GEvaluator(KernelParams params, double lambda_cut = 0.5, QuadPolicy policy = {});

    GEvaluator(const GEvaluator& other);
    GEvaluator& operator=(const GEvaluator&) = delete;

    const KernelParams& params() const { return params_; }
    double lambda_cut() const { return lambda_cut_; }
    SingularityClass singularity() const { return nlt::singularity_class(params_.beta); }

    /// Cached a_{2k}.
    double coeff(long long k) const;

    /// g(lambda) for lambda >= 0. Throws SingularityError at lambda = 1 when beta >= 1/2.
    double value(double lambda) const;
    /// dg/dlambda on [0, 1).
    double first_derivative(double lambda) const;
    /// d^2g/dlambda^2 on [0, 1).
    double second_derivative(double lambda) const;

    /// Derivative of the given order (0, 1, 2) by the power series; lambda in [0, 1).
    double by_series(int order, double lambda) const;
    /// Derivative of the given order by quadrature of the (differentiated)
    /// defining integral; any lambda >= 0 except the singular point.
    double by_quadrature(int order, double lambda) const;
    /// Same, parameterised by d = |1 - lambda| so that points within rounding
    /// distance of 1 keep full relative precision. `above` selects lambda = 1 + d.
    double near_one(int order, double d, bool above) const;

private:
    void ensure_coeffs(long long k) const;  // caller holds mutex_

    KernelParams params_;
    double lambda_cut_;
    QuadPolicy policy_;
    mutable std::mutex mutex_;
    mutable std::vector<double> coeffs_;
};

/// Relative residual |lhs - rhs| / (1 + |rhs|) of
///   g'' (lambda; m, beta) = (m+2b)[(m+2b+1) g(lambda; m, b+1) - (m+2b+2) g(lambda; m+2, b+1)],
/// with both sides computed by independent evaluators.
double check_recurrence(double lambda, int m, double beta);

struct SingularityFit {
    double exponent = 0.0;              ///< least-squares slope of log g(1-d) against log d
    std::vector<double> values;         ///< g(1 - d) for each distance
    std::vector<double> log_ratios;     ///< g(1 - d) / log(1/d)
    SingularityClass cls = SingularityClass::finite;
};

/// Fits the growth of g approaching lambda = 1 from below.
SingularityFit singularity_scale(const GEvaluator& ev, std::span<const double> distances);

}  // namespace nlt
