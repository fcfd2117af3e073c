#include "nlt/inequality.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "nlt/errors.hpp"
#include "nlt/gkernel.hpp"
#include "nlt/specfun.hpp"

namespace nlt {

namespace {

constexpr long long kTermCap = 1'000'000;

constexpr int kOrder = 6;  // terms kept in the 1/k expansion of a_2k w(k)

// Bernoulli polynomial B_j(x) from the Bernoulli numbers.
double bernoulli_poly(int j, double x) {
    static constexpr std::array<double, 8> bn{1.0, -0.5, 1.0 / 6.0, 0.0, -1.0 / 30.0, 0.0, 1.0 / 42.0, 0.0};
    double sum = 0.0, binom = 1.0;
    for (int k = 0; k <= j; ++k) {
        sum += binom * bn[k] * std::pow(x, j - k);
        binom = binom * (j - k) / (k + 1);
    }
    return sum;
}

// sum_{k > K} k^p for p < -1 by Euler-Maclaurin.
double power_tail(double p, double K) {
    const double kp = std::pow(K, p);
    return -K * kp / (p + 1.0) - 0.5 * kp - p * kp / (12.0 * K) +
           p * (p - 1.0) * (p - 2.0) * kp / (720.0 * K * K * K) -
           p * (p - 1.0) * (p - 2.0) * (p - 3.0) * (p - 4.0) * kp / (30240.0 * std::pow(K, 5));
}

// a_2k = L k^s (1 + e1/k + e2/k^2 + ...), s = 2 beta - 2, from the Stirling-type
// expansion of log Gamma(k + a) - log Gamma(k + b) in Bernoulli polynomials.
struct Asymptotic {
    double L = 0.0;
    double s = 0.0;
    std::array<double, kOrder> e{};
};

Asymptotic coefficient_asymptotic(int m, double beta) {
    Asymptotic a;
    a.L = coeff_ratio_limit({m, beta});
    a.s = 2.0 * beta - 2.0;
    const double h = 0.5 * m;
    std::array<double, kOrder> d{};
    for (int j = 1; j < kOrder; ++j) {
        const double num = bernoulli_poly(j + 1, beta) + bernoulli_poly(j + 1, h + beta) -
                           bernoulli_poly(j + 1, 1.0) - bernoulli_poly(j + 1, h + 1.0);
        d[j] = ((j % 2 == 1) ? 1.0 : -1.0) * num / (j * (j + 1.0));
    }
    // exp of a power series
    a.e[0] = 1.0;
    for (int k = 1; k < kOrder; ++k) {
        double acc = 0.0;
        for (int j = 1; j <= k; ++j) acc += j * d[j] * a.e[k - j];
        a.e[k] = acc / k;
    }
    return a;
}

// One series sum_k a_2k w(k), where w(k) = k^{-shift} (w0 + w1/k + w2/k^2 + ...) for large k.
struct SeriesSpec {
    long long k0;  // first index
    int shift;
    std::array<double, kOrder> w;
    double (*weight)(long long k);
};

SeriesValue sum_series(const GEvaluator& ev, const Asymptotic& as, const SeriesSpec& sp,
                       double tol, bool& converged) {
    std::array<double, kOrder> c{};
    for (int i = 0; i < kOrder; ++i)
        for (int j = 0; i + j < kOrder; ++j) c[i + j] += as.e[i] * sp.w[j];

    const KernelParams kp = ev.params();
    const double beta = kp.beta;
    const double h = 0.5 * kp.m;
    long double partial = 0.0L;
    double a = ev.coeff(0);
    long long k = 0;
    auto advance_to = [&](long long K) {
        for (; k <= K; ++k) {
            if (k > 0) {
                // re-anchor the product recurrence periodically to bound its drift
                a = (k % 1024 == 0) ? taylor_coeff(kp, k)
                                    : a * (beta + k - 1) * (h + beta + k - 1) / (double(k) * (h + k));
            }
            if (k >= sp.k0) partial += static_cast<long double>(a) * sp.weight(k);
        }
    };

    SeriesValue out;
    for (long long K = 256;; K = std::min(K * 4, kTermCap)) {
        advance_to(K);
        double tail = 0.0;
        for (int j = 0; j < kOrder; ++j) tail += c[j] * power_tail(as.s - sp.shift - j, double(K));
        tail *= as.L;
        // first omitted order, estimated from the last kept one
        const double rem = as.L * std::abs(c[kOrder - 1] * power_tail(as.s - sp.shift - kOrder + 1, double(K))) / double(K);
        out.value = static_cast<double>(partial) + tail;
        out.error = rem + 4e-16 * std::abs(out.value);
        out.terms = K;
        if (out.error <= 0.1 * tol) break;
        if (K == kTermCap) {
            converged = false;
            break;
        }
    }
    return out;
}

double unit_weight(long long) { return 1.0; }
double inv_k(long long k) { return 1.0 / double(k); }
double inv_odd(long long k) { return 1.0 / (2.0 * double(k) + 1.0); }

std::string fmt(const char* pattern, double v) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

}  // namespace

SeriesSums series_sums(int n, double alpha, double tol) {
    if (!(tol > 0.0)) throw DomainError("series_sums requires tol > 0");
    GEvaluator ev(KernelParams::for_transport(n, alpha));
    const auto as = coefficient_asymptotic(n, alpha);
    SeriesSums out;
    if (alpha < 0.5) {
        out.S0 = sum_series(ev, as, {0, 0, {1.0}, unit_weight}, tol, out.converged);
    }
    out.S1 = sum_series(ev, as, {1, 1, {1.0}, inv_k}, tol, out.converged);
    // 1/(2k+1) = (1/k)(1/2 - 1/(4k) + 1/(8k^2) - ...)
    out.S2 = sum_series(ev, as, {0, 1, {0.5, -0.25, 0.125, -0.0625, 0.03125, -0.015625}, inv_odd}, tol,
                        out.converged);
    return out;
}

const char* to_string(ProofCase c) {
    switch (c) {
        case ProofCase::sub: return "sub";
        case ProofCase::crit: return "crit";
        case ProofCase::super: return "super";
    }
    return "?";
}

double prop31_constant(int n, double alpha) {
    using specfun::gamma;
    return alpha * std::pow(2.0, 2.0 * alpha - 1.0) * gamma(0.5 * n + alpha) /
           (gamma(1.0 - alpha) * gamma(0.5 * n + 1.0));
}

ConstantBundle constant_bundle(int n, double alpha, double tol) {
    NonlocalParams{n, alpha}.validate();
    if (alpha != 0.5 && std::abs(alpha - 0.5) < 1e-9)
        throw DomainError("alpha within 1e-9 of 1/2 is not supported; use exactly 0.5");
    using specfun::gamma;
    ConstantBundle b;
    b.n = n;
    b.alpha = alpha;
    const auto kc = kernel_constants(n, alpha);
    b.c_na = kc.c_na;
    b.c_prime = kc.c_prime;
    b.c_dprime = kc.c_dprime;
    b.C_prime = 0.5 * prop31_constant(n, alpha);
    b.sums = series_sums(n, alpha, tol);
    const double S1 = b.sums.S1.value;
    const double S2 = b.sums.S2.value;
    const double B = specfun::beta(0.5, 0.5 * (n + 1));
    const double aB = alpha * B;
    auto& tr = b.trace;
    tr.push_back(fmt("c'' = %.17g", b.c_dprime));
    tr.push_back(fmt("B(1/2,(n+1)/2) = %.17g", B));
    tr.push_back(fmt("S1 = %.17g", S1));
    tr.push_back(fmt("S2 = %.17g", S2));

    // Every case bounds the cross term I from below by -aB * int (f-f(0))^2/r^{1+2a}
    // minus K ||f||^2; then C'' = (c''/2) K.
    double K = 0.0;
    if (alpha < 0.5) {
        b.case_tag = ProofCase::sub;
        const double S0 = b.sums.S0->value;
        tr.push_back(fmt("S0 = %.17g", S0));
        K = 4.0 * gamma(1.0 - 2.0 * alpha) * S0;
        tr.push_back(fmt("sub: I >= -4 Gamma(1-2a) S0 ||f||^2, K = %.17g", K));
    } else if (alpha > 0.5) {
        b.case_tag = ProofCase::super;
        const double X = 2.0 * (n - 1) * S1 + 8.0 * alpha * S2;
        const double eps = aB / X;
        tr.push_back(fmt("super: X = 2(n-1) S1 + 8a S2 = %.17g", X));
        tr.push_back(fmt("super: eps = aB / X = %.17g", eps));
        K = X * (1.0 / ((2.0 - 2.0 * alpha) * eps) + 4.0 / (2.0 * alpha - 1.0)) +
            2.0 * gamma(2.0 - 2.0 * alpha) * S1;
        tr.push_back(fmt("super: K = X (1/((2-2a) eps) + 4/(2a-1)) + 2 Gamma(2-2a) S1 = %.17g", K));
    } else {
        b.case_tag = ProofCase::crit;
        const double Y5 = 4.0 * (n - 1) * S1 + 5.0 * S2;
        const double Y2 = 4.0 * (n - 1) * S1 + 2.0 * S2;
        const double e5 = aB / (2.0 * Y5);
        const double e2 = aB / (2.0 * Y2);
        tr.push_back(fmt("crit: Y5 = 4(n-1) S1 + 5 S2 = %.17g", Y5));
        tr.push_back(fmt("crit: Y2 = 4(n-1) S1 + 2 S2 = %.17g", Y2));
        tr.push_back(fmt("crit: eps5 = aB / (2 Y5) = %.17g", e5));
        tr.push_back(fmt("crit: eps2 = aB / (2 Y2) = %.17g", e2));
        K = Y5 * (8.0 + 1.0 / e5) + 2.0 * S1 + Y2 * (4.0 + 1.0 / (4.0 * e2));
        tr.push_back(fmt("crit: K = Y5 (8 + 1/eps5) + 2 S1 + Y2 (4 + 1/(4 eps2)) = %.17g", K));
    }
    b.C_dprime = 0.5 * b.c_dprime * K;
    tr.push_back(fmt("C'' = c'' K / 2 = %.17g", b.C_dprime));
    const double omega = specfun::sphere_area(n);
    b.A = omega * gamma(2.0 * alpha) * std::pow(2.0, -2.0 * alpha) * std::sqrt(b.C_dprime / b.C_prime);
    tr.push_back(fmt("A = omega Gamma(2a) 2^{-2a} sqrt(C''/C') = %.17g", b.A));
    return b;
}

namespace {

VerifyResult finish(double lhs, double rhs, double constant, double tol_rel) {
    VerifyResult v;
    v.lhs = lhs;
    v.rhs = rhs;
    v.slack = lhs - rhs;
    v.constant = constant;
    v.holds = v.slack >= -tol_rel * (1.0 + std::abs(lhs));
    return v;
}

}  // namespace

VerifyResult verify_prop31(const RadialProfile& f, const NonlocalParams& p,
                           std::optional<double> constant_override, double tol_rel) {
    p.validate();
    const double C = constant_override.value_or(prop31_constant(p.n, p.alpha));
    if (f.is_constant()) return finish(0.0, 0.0, C, tol_rel);
    const double lhs = weighted_lhs(f, p, Weight::plain).value;
    const double R = functional_R(f, p.n, p.alpha).value;
    return finish(lhs, C * R, C, tol_rel);
}

VerifyResult verify_prop32(const RadialProfile& f, const NonlocalParams& p,
                           const ConstantBundle& b, std::optional<double> constant_override,
                           double tol_rel) {
    p.validate();
    if (b.n != p.n || b.alpha != p.alpha)
        throw DomainError("constant bundle does not match (n, alpha)");
    const double C = constant_override.value_or(b.C_prime);
    const double M = f.sup_norm();
    if (f.is_constant()) return finish(0.0, -b.C_dprime * M * M, C, tol_rel);
    const double lhs = weighted_lhs(f, p, Weight::exponential).value;
    const double R = functional_R(f, p.n, p.alpha).value;
    return finish(lhs, C * R - b.C_dprime * M * M, C, tol_rel);
}

RiccatiCoeffs riccati_coeffs(const ConstantBundle& b, double sup_norm) {
    if (!(sup_norm >= 0.0)) throw DomainError("riccati_coeffs requires sup_norm >= 0");
    const double omega = specfun::sphere_area(b.n);
    const double g = specfun::gamma(2.0 * b.alpha);
    return {std::pow(2.0, 4.0 * b.alpha) * b.C_prime / (omega * omega * g * g),
            b.C_dprime * sup_norm * sup_norm};
}

double blowup_time(const RiccatiCoeffs& c, double J0) {
    if (!(c.c1 > 0.0) || !(c.c2 >= 0.0)) throw DomainError("blowup_time requires c1 > 0, c2 >= 0");
    const double q = std::sqrt(c.c2 / c.c1);
    if (!(J0 > q)) throw DomainError("blowup_time requires J0 > sqrt(c2/c1)");
    if (c.c2 == 0.0) return 1.0 / (c.c1 * J0);
    const double s1 = std::sqrt(c.c1), s2 = std::sqrt(c.c2);
    return std::log1p(2.0 * s2 / (s1 * J0 - s2)) / (2.0 * s1 * s2);
}

double comparison_solution(const RiccatiCoeffs& c, double J0, double t) {
    const double T0 = blowup_time(c, J0);
    if (!(t >= 0.0)) throw DomainError("comparison_solution requires t >= 0");
    if (!(t < T0)) throw DomainError("comparison_solution evaluated at or beyond the blow-up time");
    if (c.c2 == 0.0) return J0 / (1.0 - c.c1 * J0 * t);
    const double q = std::sqrt(c.c2 / c.c1);
    const double E = std::exp(2.0 * std::sqrt(c.c1 * c.c2) * t);
    return q * ((J0 + q) + (J0 - q) * E) / ((J0 + q) - (J0 - q) * E);
}

InitialCheck verify_initial_condition(const RadialProfile& f, const ConstantBundle& b) {
    InitialCheck out;
    out.J0 = f.is_constant() ? 0.0 : functional_J(f, b.n).value;
    out.threshold = b.A * f.sup_norm();
    out.qualifies = out.J0 > out.threshold;
    return out;
}

double qualifying_bump_delta(const ConstantBundle& b) {
    return 0.25 * std::exp(-std::numbers::e * b.A / specfun::sphere_area(b.n));
}

}  // namespace nlt
