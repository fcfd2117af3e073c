#include "nlt/quadrature.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>
#include <string>

#include "nlt/errors.hpp"

namespace nlt::quad {

namespace {

// Kronrod abscissae (positive half) and weights, QUADPACK qk15.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the 7-point rule living on the odd Kronrod nodes.
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    const double value = resk * h;
    double err = std::abs((resk - resg) * h);
    if (!std::isfinite(value)) err = std::numeric_limits<double>::infinity();
    return {a, b, value, err};
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, const Tolerance& tol,
                 std::span<const double> breakpoints) {
    Result out;
    if (a == b) return out;
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }

    std::vector<double> cuts{a};
    for (double p : breakpoints) {
        if (p > a && p < b) cuts.push_back(p);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<Panel> heap;
    double total = 0.0;
    double total_err = 0.0;
    double total_abs = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Panel p = gk15(f, cuts[i], cuts[i + 1]);
        out.evaluations += 15;
        total += p.value;
        total_err += p.error;
        total_abs += std::abs(p.value);
        heap.push(p);
    }

    auto done = [&] {
        return total_err <= std::max({tol.abs, tol.rel * std::abs(total), tol.l1_rel * total_abs});
    };
    while (!done()) {
        if (static_cast<int>(heap.size()) >= tol.max_intervals) {
            out.converged = false;
            break;
        }
        Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Interval cannot be split further in floating point.
            out.converged = false;
            break;
        }
        heap.pop();
        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        total_abs += std::abs(left.value) + std::abs(right.value) - std::abs(worst.value);
        heap.push(left);
        heap.push(right);
    }

    // Re-sum to shed the drift of incremental updates.
    total = 0.0;
    total_err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        total_err += heap.top().error;
        heap.pop();
    }
    out.value = sign * total;
    out.error = total_err;
    if (!std::isfinite(out.value)) out.converged = false;
    return out;
}

Result integrate_checked(const Integrand& f, double a, double b, const Tolerance& tol,
                         std::span<const double> breakpoints, const char* context) {
    Result r = integrate(f, a, b, tol, breakpoints);
    if (!r.converged) {
        // Accept a stalled refinement when the error is still small in relative terms.
        const double accept = std::max(tol.abs, tol.rel * std::abs(r.value)) * 1e3;
        // l1_rel callers accept the same slack against the absolute mass
        const double accept_l1 = tol.l1_rel * 1e3 * std::abs(r.value);
        if (!std::isfinite(r.value) || (r.error > accept && r.error > accept_l1)) {
            char where[96];
            std::snprintf(where, sizeof where, " on [%.6g, %.6g], value %.6g", a, b, r.value);
            throw ConvergenceError(std::string("quadrature did not converge: ") + context + where,
                                   r.error);
        }
    }
    return r;
}

namespace {

GaussLegendre compute_gauss_legendre(int n) {
    GaussLegendre rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute derivative at the converged root.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
    if (n < 1) throw DomainError("gauss_legendre requires n >= 1");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussLegendre>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussLegendre>(compute_gauss_legendre(n));
    return *slot;
}

double fixed_gauss(const Integrand& f, double a, double b, int order) {
    const auto& rule = gauss_legendre(order);
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < order; ++i) s += rule.weights[i] * f(c + h * rule.nodes[i]);
    return s * h;
}

}  // namespace nlt::quad
