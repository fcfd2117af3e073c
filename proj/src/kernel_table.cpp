#include "nlt/kernel_table.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "nlt/errors.hpp"
#include "nlt/quadrature.hpp"

namespace nlt {

namespace {

constexpr int kCoeffs = 240;

double lagrange6(const double* y, double x) {
    // nodes at 0..5, evaluate at x
    double sum = 0.0;
    for (int i = 0; i < 6; ++i) {
        double w = 1.0;
        for (int j = 0; j < 6; ++j) {
            if (j != i) w *= (x - j) / static_cast<double>(i - j);
        }
        sum += w * y[i];
    }
    return sum;
}

}  // namespace

KernelTable::KernelTable(KernelParams p, double d_min, double step)
    : params_(p), ev_(p), d_min_(d_min) {
    if (!(d_min > 0.0 && d_min < 1e-3)) throw DomainError("KernelTable d_min must lie in (0, 1e-3)");
    if (!(p.beta < 1.0)) throw DomainError("KernelTable requires beta < 1");
    coeffs_.resize(kCoeffs);
    for (int k = 0; k < kCoeffs; ++k) coeffs_[k] = ev_.coeff(k);

    s_lo_ = std::log(d_min);
    const double s_hi = std::log(0.5);
    const int n = static_cast<int>(std::ceil((s_hi - s_lo_) / step)) + 1;
    step_ = (s_hi - s_lo_) / (n - 1);

    for (int order = 0; order < 3; ++order) {
        auto& tab = log_g_[order];
        tab.resize(n);
        for (int j = 0; j < n; ++j) {
            const double d = std::exp(s_lo_ + j * step_);
            const double v = ev_.near_one(order, d, false);
            if (!(v > 0.0)) {
                throw ConvergenceError("nonpositive kernel value while tabulating", v);
            }
            // g' vanishes linearly at lambda = 0; store g'/lambda so the log stays smooth
            tab[j] = std::log(order == 1 ? v / (1.0 - d) : v);
        }
    }

    // Moments below the table reach, by direct quadrature on geometric panels.
    const double b = p.beta;
    auto w_m = [&](double t) { return std::pow(1.0 - t, p.m); };
    auto w_k = [&](double t) { return std::pow(1.0 - t, 2.0 * b - 2.0); };
    std::vector<double> cuts;
    for (int j = 1; j <= 90; ++j) cuts.push_back(d_min * std::ldexp(1.0, -j));
    quad::Tolerance tol{1e-300, 1e-13, 4000};
    m_floor_ = quad::integrate_checked(
                   [&](double t) { return w_m(t) * ev_.near_one(0, t, false); }, 0.0, d_min, tol,
                   cuts, "kernel moment floor")
                   .value;
    k_floor_ = quad::integrate_checked(
                   [&](double t) { return w_k(t) * ev_.near_one(0, t, false); }, 0.0, d_min, tol,
                   cuts, "kernel moment floor")
                   .value;

    // Cumulative moments across the table cells in the log variable.
    const auto& gl = quad::gauss_legendre(10);
    log_m_.resize(n);
    log_k_.resize(n);
    double m_acc = m_floor_;
    double k_acc = k_floor_;
    log_m_[0] = std::log(m_acc);
    log_k_[0] = std::log(k_acc);
    for (int j = 0; j + 1 < n; ++j) {
        const double a = s_lo_ + j * step_;
        const double c = a + 0.5 * step_;
        double dm = 0.0, dk = 0.0;
        for (int i = 0; i < 10; ++i) {
            const double s = c + 0.5 * step_ * gl.nodes[i];
            const double t = std::exp(s);
            const double g = std::exp(interp(log_g_[0], s));
            dm += gl.weights[i] * t * w_m(t) * g;
            dk += gl.weights[i] * t * w_k(t) * g;
        }
        m_acc += 0.5 * step_ * dm;
        k_acc += 0.5 * step_ * dk;
        log_m_[j + 1] = std::log(m_acc);
        log_k_[j + 1] = std::log(k_acc);
    }

    h_half_ = moment(0.5);
    h_one_ = h_half_ + m_acc;
    h_two_ = h_one_ + k_acc;
}

std::shared_ptr<const KernelTable> KernelTable::shared(KernelParams p) {
    static std::mutex mu;
    static std::map<std::pair<int, double>, std::shared_ptr<const KernelTable>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{p.m, p.beta}];
    if (!slot) slot = std::make_shared<const KernelTable>(p);
    return slot;
}

double KernelTable::interp(const std::vector<double>& table, double s) const {
    const int n = static_cast<int>(table.size());
    const double x = (s - s_lo_) / step_;
    int start = static_cast<int>(std::floor(x)) - 2;
    start = std::clamp(start, 0, n - 6);
    return lagrange6(table.data() + start, x - start);
}

double KernelTable::series(int order, double lambda) const {
    if (lambda == 0.0) {
        if (order == 0) return coeffs_[0];
        if (order == 1) return 0.0;
        return 2.0 * coeffs_[1];
    }
    const double x = lambda * lambda;
    double sum = 0.0;
    double xp = 1.0;
    for (int k = 0; k < kCoeffs; ++k) {
        const double dk = k;
        double term;
        if (order == 0) {
            term = coeffs_[k] * xp;
        } else if (order == 1) {
            term = k == 0 ? 0.0 : 2.0 * dk * coeffs_[k] * xp / lambda;
        } else {
            term = k == 0 ? 0.0 : 2.0 * dk * (2.0 * dk - 1.0) * coeffs_[k] * xp / x;
        }
        sum += term;
        if (k > 2 && std::abs(term) <= 1e-17 * std::abs(sum)) return sum;
        xp *= x;
    }
    // lambda too close to 1 for the stored coefficients
    return ev_.by_series(order, lambda);
}

double KernelTable::below(int order, double d) const {
    if (order < 0 || order > 2) throw DomainError("derivative order must be 0, 1 or 2");
    if (!(d > 0.0 && d <= 1.0)) throw DomainError("below() requires d in (0, 1]");
    if (d >= 0.5) return series(order, 1.0 - d);
    if (d < d_min_) return ev_.near_one(order, d, false);
    const double v = std::exp(interp(log_g_[order], std::log(d)));
    return order == 1 ? v * (1.0 - d) : v;
}

double KernelTable::above(int order, double d) const {
    if (order < 0 || order > 2) throw DomainError("derivative order must be 0, 1 or 2");
    if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("above() requires finite d > 0");
    const double lambda = 1.0 + d;
    const double q = params_.m + 2.0 * params_.beta;
    const double dm = d / lambda;  // 1 - 1/lambda
    const double lq = std::pow(lambda, -q);
    const double g0 = below(0, dm);
    if (order == 0) return lq * g0;
    const double g1 = below(1, dm);
    const double inv = 1.0 / lambda;
    if (order == 1) return -lq * inv * (q * g0 + inv * g1);
    const double g2 = below(2, dm);
    return lq * inv * inv * (q * (q + 1.0) * g0 + inv * ((2.0 * q + 2.0) * g1 + inv * g2));
}

double KernelTable::eval(int order, double lambda) const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw DomainError("kernel requires finite lambda >= 0");
    }
    if (lambda <= 0.5) return series(order, lambda);
    if (lambda < 1.0) return below(order, 1.0 - lambda);
    if (lambda == 1.0) {
        if (order == 0 && params_.beta < 0.5) return ev_.value(1.0);
        throw SingularityError("kernel is singular at lambda = 1");
    }
    return above(order, lambda - 1.0);
}

double KernelTable::tail_m(double d) const {
    if (d < d_min_) return m_floor_ * std::pow(d / d_min_, std::min(1.0, 2.0 - 2.0 * params_.beta));
    return std::exp(interp(log_m_, std::log(d)));
}

double KernelTable::tail_k(double d) const {
    if (d < d_min_) return k_floor_ * std::pow(d / d_min_, std::min(1.0, 2.0 - 2.0 * params_.beta));
    return std::exp(interp(log_k_, std::log(d)));
}

double KernelTable::moment(double lambda) const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw DomainError("moment requires finite lambda >= 0");
    }
    if (lambda <= 0.5) {
        const double x = lambda * lambda;
        double xp = std::pow(lambda, params_.m + 1);
        double sum = 0.0;
        for (int k = 0; k < kCoeffs; ++k) {
            const double term = coeffs_[k] * xp / (2.0 * k + params_.m + 1);
            sum += term;
            if (term <= 1e-17 * sum) break;
            xp *= x;
        }
        return sum;
    }
    if (lambda < 1.0) return moment_below(1.0 - lambda);
    if (lambda == 1.0) return h_one_;
    return moment_above(lambda - 1.0);
}

double KernelTable::moment_below(double d) const {
    if (!(d >= 0.0 && d <= 1.0)) throw DomainError("moment_below requires d in [0, 1]");
    if (d == 0.0) return h_one_;
    if (d >= 0.5) return moment(1.0 - d);
    return h_one_ - tail_m(d);
}

double KernelTable::moment_above(double d) const {
    if (!(d >= 0.0) || !std::isfinite(d)) throw DomainError("moment_above requires finite d >= 0");
    if (d == 0.0) return h_one_;
    const double lambda = 1.0 + d;
    const double dm = d / lambda;
    if (dm <= 0.5) return h_one_ + tail_k(dm);
    // int_{1/lambda}^{1/2} u^{2b-2} g(u) du termwise
    const double ln2 = std::log(2.0);
    const double ll = std::log(lambda);
    double sum = 0.0;
    for (int k = 0; k < kCoeffs; ++k) {
        const double e = 2.0 * k + 2.0 * params_.beta - 1.0;
        double term;
        if (e == 0.0) {
            term = coeffs_[k] * (ll - ln2);
        } else {
            term = coeffs_[k] * (std::expm1(-e * ln2) - std::expm1(-e * ll)) / e;
        }
        sum += term;
        if (k > 2 && std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return h_two_ + sum;
}

}  // namespace nlt
