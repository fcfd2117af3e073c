#include "nlt/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nlt/errors.hpp"

namespace nlt::specfun {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError(std::string(what) + " requires a positive finite argument, got " +
                          std::to_string(v));
    }
}

}  // namespace

double gamma(double s) {
    require_positive(s, "gamma");
    // libstdc++ tgamma is accurate to a few ulp on the positive axis; beyond
    // its overflow point fall back to the log form so callers get inf, not NaN.
    if (s < 171.0) return std::tgamma(s);
    return std::exp(std::lgamma(s));
}

double log_gamma(double s) {
    require_positive(s, "log_gamma");
    return std::lgamma(s);
}

double gamma_limit_partial(double s, long long k) {
    require_positive(s, "gamma_limit_partial");
    if (k < 1) throw DomainError("gamma_limit_partial requires k >= 1");
    // log(k^s k!) - sum_{j=0}^{k} log(s+j); the factorial is summed term by
    // term alongside the denominator so the two cancel without overflow.
    double acc = s * std::log(static_cast<double>(k)) - std::log(s);
    for (long long j = 1; j <= k; ++j) {
        const double dj = static_cast<double>(j);
        acc += std::log(dj) - std::log(s + dj);
    }
    return std::exp(acc);
}

double beta(double p, double q) {
    require_positive(p, "beta");
    require_positive(q, "beta");
    if (p + q < 100.0) return gamma(p) * gamma(q) / gamma(p + q);
    return std::exp(std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q));
}

double log_pochhammer(double x, long long k) {
    require_positive(x, "log_pochhammer");
    if (k < 0) throw DomainError("pochhammer requires k >= 0");
    return std::lgamma(x + static_cast<double>(k)) - std::lgamma(x);
}

double pochhammer(double x, long long k) {
    if (k < 0) throw DomainError("pochhammer requires k >= 0");
    if (k > 50 && x > 0.0) return std::exp(log_pochhammer(x, k));
    double p = 1.0;
    for (long long j = 0; j < k; ++j) p *= x + static_cast<double>(j);
    return p;
}

double sphere_area(int n) {
    if (n < 1) throw DomainError("sphere_area requires n >= 1, got " + std::to_string(n));
    const double half = 0.5 * n;
    return 2.0 * std::pow(std::numbers::pi, half) / gamma(half);
}

double expint_e1(double x) {
    require_positive(x, "expint_e1");
    if (x < 1e-8) {
        // -gamma - ln x + x - x^2/4 ; higher terms are below double precision here.
        return -std::numbers::egamma - std::log(x) + x - 0.25 * x * x;
    }
    if (x > 700.0) return 0.0;
    return -std::expint(-x);
}

}  // namespace nlt::specfun
