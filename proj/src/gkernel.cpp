#include "nlt/gkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nlt/errors.hpp"
#include "nlt/quadrature.hpp"
#include "nlt/specfun.hpp"

namespace nlt {

SingularityClass singularity_class(double beta) {
    if (beta < 0.5) return SingularityClass::finite;
    if (beta == 0.5) return SingularityClass::logarithmic;
    return SingularityClass::power;
}

namespace {

void validate(const KernelParams& p) {
    if (p.m < 1) throw DomainError("kernel requires m >= 1, got " + std::to_string(p.m));
    if (!(p.beta > 0.0) || !std::isfinite(p.beta)) {
        throw DomainError("kernel requires beta > 0, got " + std::to_string(p.beta));
    }
}

double leading_coeff(const KernelParams& p) { return specfun::beta(0.5, 0.5 * (p.m + 1)); }

}  // namespace

double taylor_coeff(const KernelParams& p, long long k) {
    validate(p);
    if (k < 0) throw DomainError("taylor_coeff requires k >= 0");
    const double a0 = leading_coeff(p);
    if (k == 0) return a0;
    const double half_m = 0.5 * p.m;
    if (k <= 50) {
        return a0 * specfun::pochhammer(p.beta, k) * specfun::pochhammer(half_m + p.beta, k) /
               (specfun::pochhammer(1.0, k) * specfun::pochhammer(half_m + 1.0, k));
    }
    const double log_ratio = specfun::log_pochhammer(p.beta, k) +
                             specfun::log_pochhammer(half_m + p.beta, k) -
                             specfun::log_pochhammer(1.0, k) -
                             specfun::log_pochhammer(half_m + 1.0, k);
    return a0 * std::exp(log_ratio);
}

double coeff_ratio_limit(const KernelParams& p) {
    validate(p);
    const double half_m = 0.5 * p.m;
    return std::exp(specfun::log_gamma(0.5) + specfun::log_gamma(half_m + 0.5) -
                    specfun::log_gamma(p.beta) - specfun::log_gamma(half_m + p.beta));
}

double g_at_one_closed_form(const KernelParams& p) {
    validate(p);
    if (!(p.beta < 0.5)) throw SingularityError("g(1) is infinite for beta >= 1/2");
    return std::pow(2.0, -2.0 * p.beta) * specfun::beta(0.5 - p.beta, 0.5 * (p.m + 1));
}

GEvaluator::GEvaluator(KernelParams params, double lambda_cut, QuadPolicy policy)
    : params_(params), lambda_cut_(lambda_cut), policy_(policy) {
    validate(params_);
    if (!(lambda_cut_ > 0.0 && lambda_cut_ < 1.0)) {
        throw DomainError("lambda_cut must lie in (0, 1)");
    }
    std::lock_guard lock(mutex_);
    ensure_coeffs(64);
}

GEvaluator::GEvaluator(const GEvaluator& other)
    : params_(other.params_), lambda_cut_(other.lambda_cut_), policy_(other.policy_) {
    std::lock_guard lock(other.mutex_);
    coeffs_ = other.coeffs_;
}

void GEvaluator::ensure_coeffs(long long k) const {
    if (static_cast<long long>(coeffs_.size()) > k) return;
    if (coeffs_.empty()) coeffs_.push_back(leading_coeff(params_));
    const double half_m = 0.5 * params_.m;
    const double b = params_.beta;
    // a_{2k+2}/a_{2k} = (b+k)(m/2+b+k) / ((k+1)(m/2+1+k))
    while (static_cast<long long>(coeffs_.size()) <= k) {
        const double j = static_cast<double>(coeffs_.size() - 1);
        coeffs_.push_back(coeffs_.back() * (b + j) * (half_m + b + j) /
                          ((j + 1.0) * (half_m + 1.0 + j)));
    }
}

double GEvaluator::coeff(long long k) const {
    if (k < 0) throw DomainError("coeff requires k >= 0");
    std::lock_guard lock(mutex_);
    ensure_coeffs(k);
    return coeffs_[static_cast<std::size_t>(k)];
}

double GEvaluator::by_series(int order, double lambda) const {
    if (order < 0 || order > 2) throw DomainError("derivative order must be 0, 1 or 2");
    if (!(lambda >= 0.0 && lambda < 1.0)) {
        throw DomainError("series evaluation requires 0 <= lambda < 1");
    }
    if (lambda == 0.0) {
        if (order == 1) return 0.0;
        if (order == 2) return 2.0 * coeff(1);
        return coeff(0);
    }
    const double x = lambda * lambda;
    std::lock_guard lock(mutex_);
    double sum = 0.0;
    double xp = 1.0;  // lambda^{2k}
    constexpr long long kMax = 2000000;
    for (long long k = 0; k < kMax; ++k) {
        ensure_coeffs(k);
        const double a = coeffs_[static_cast<std::size_t>(k)];
        double term = 0.0;
        const double dk = static_cast<double>(k);
        switch (order) {
            case 0: term = a * xp; break;
            case 1: term = k == 0 ? 0.0 : 2.0 * dk * a * xp / lambda; break;
            default: term = k == 0 ? 0.0 : 2.0 * dk * (2.0 * dk - 1.0) * a * xp / x; break;
        }
        sum += term;
        if (k > 4 && std::abs(term) < 1e-17 * std::abs(sum)) break;
        xp *= x;
    }
    return sum;
}

namespace {

struct NearOneIntegrand {
    int m;
    double beta;
    int order;
    double lambda;
    double offset;  // lambda - 1, carried exactly
    double d;       // |lambda - 1|

    double operator()(double mu) const {
        const double s = std::sin(mu);
        const double half = std::sin(0.5 * mu);
        const double t2 = half * half;
        // log(d^2 + 4 lambda t^2) without forming squares that under- or overflow
        const double w = 2.0 * std::sqrt(lambda) * std::abs(half);
        const double big = std::max(d, w), small = std::min(d, w);
        const double q = small / big;
        const double log_den = 2.0 * std::log(big) + std::log1p(q * q);
        const double p = 0.5 * m + beta;
        const double log_sm = m * std::log(s);
        const double c = m + 2.0 * beta;
        switch (order) {
            case 0: return std::exp(log_sm - p * log_den);
            case 1: {
                const double lc = offset + 2.0 * t2;  // lambda - cos(mu)
                return -c * lc * std::exp(log_sm - (p + 1.0) * log_den);
            }
            default: {
                const double lc = offset + 2.0 * t2;
                return c * (c + 2.0) * lc * lc * std::exp(log_sm - (p + 2.0) * log_den) -
                       c * std::exp(log_sm - (p + 1.0) * log_den);
            }
        }
    }
};

}  // namespace

double GEvaluator::near_one(int order, double d, bool above) const {
    if (order < 0 || order > 2) throw DomainError("derivative order must be 0, 1 or 2");
    if (!(d >= 0.0)) throw DomainError("near_one requires d >= 0");
    const double lambda = above ? 1.0 + d : 1.0 - d;
    if (d == 0.0) {
        if (order == 0 && params_.beta < 0.5) {
            // u = sin(mu/2), then u = v^{1/(1-2b)} removes the u^{-2b} endpoint singularity:
            //   g(1) = 2^{1-2b}/(1-2b) int_0^1 (1 - u(v)^2)^{(m-1)/2} dv.
            const double b = params_.beta;
            const double e = 1.0 / (1.0 - 2.0 * b);
            auto f = [&](double v) {
                const double u = std::pow(v, e);
                return std::pow(std::max(0.0, 1.0 - u * u), 0.5 * (params_.m - 1));
            };
            quad::Tolerance tol{policy_.abs_tol, policy_.rel_tol, policy_.max_intervals};
            const auto r = quad::integrate_checked(f, 0.0, 1.0, tol, {}, "g at lambda = 1");
            return std::pow(2.0, 1.0 - 2.0 * b) * e * r.value;
        }
        throw SingularityError("kernel derivative is not defined at lambda = 1");
    }
    NearOneIntegrand f{params_.m, params_.beta, order, lambda, above ? d : -d, d};
    // Peak width in mu is about d / sqrt(lambda); seed geometric panels from there.
    std::vector<double> cuts;
    const double scale = d / std::sqrt(lambda);
    for (double c = 0.25 * scale; c < std::numbers::pi; c *= 2.0) cuts.push_back(c);
    quad::Tolerance tol{policy_.abs_tol, policy_.rel_tol, policy_.max_intervals};
    const auto r = quad::integrate_checked(std::cref(f), 0.0, std::numbers::pi, tol, cuts,
                                           "kernel integral");
    return r.value;
}

double GEvaluator::by_quadrature(int order, double lambda) const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw DomainError("kernel requires finite lambda >= 0");
    }
    if (lambda >= 1.0) return near_one(order, lambda - 1.0, true);
    return near_one(order, 1.0 - lambda, false);
}

double GEvaluator::value(double lambda) const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw DomainError("g_eval requires finite lambda >= 0");
    }
    if (lambda == 1.0) {
        if (params_.beta >= 0.5) {
            throw SingularityError("g is not integrable at lambda = 1 for beta >= 1/2");
        }
        return near_one(0, 0.0, false);
    }
    if (lambda > 1.0) {
        return std::pow(lambda, -(params_.m + 2.0 * params_.beta)) * value(1.0 / lambda);
    }
    if (lambda <= lambda_cut_) return by_series(0, lambda);
    return by_quadrature(0, lambda);
}

double GEvaluator::first_derivative(double lambda) const {
    if (!(lambda >= 0.0 && lambda < 1.0)) throw DomainError("g_prime requires 0 <= lambda < 1");
    if (lambda <= lambda_cut_) return by_series(1, lambda);
    return by_quadrature(1, lambda);
}

double GEvaluator::second_derivative(double lambda) const {
    if (!(lambda >= 0.0 && lambda < 1.0)) throw DomainError("g_second requires 0 <= lambda < 1");
    if (lambda <= lambda_cut_) return by_series(2, lambda);
    return by_quadrature(2, lambda);
}

double check_recurrence(double lambda, int m, double beta) {
    if (!(lambda >= 0.0 && lambda < 1.0)) {
        throw DomainError("check_recurrence requires 0 <= lambda < 1");
    }
    const GEvaluator base({m, beta});
    const GEvaluator shifted({m, beta + 1.0});
    const GEvaluator shifted_m({m + 2, beta + 1.0});
    const double c = m + 2.0 * beta;
    const double lhs = base.second_derivative(lambda);
    const double rhs = c * ((c + 1.0) * shifted.value(lambda) - (c + 2.0) * shifted_m.value(lambda));
    return std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
}

SingularityFit singularity_scale(const GEvaluator& ev, std::span<const double> distances) {
    if (distances.size() < 2) throw DomainError("singularity_scale needs at least two distances");
    SingularityFit fit;
    fit.cls = ev.singularity();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double d : distances) {
        if (!(d > 0.0 && d < 1.0)) throw DomainError("distances must lie in (0, 1)");
        const double g = ev.near_one(0, d, false);
        fit.values.push_back(g);
        fit.log_ratios.push_back(g / std::log(1.0 / d));
        const double x = std::log(d);
        const double y = std::log(g);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(distances.size());
    fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return fit;
}

}  // namespace nlt
