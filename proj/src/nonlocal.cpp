#include "nlt/nonlocal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "nlt/errors.hpp"
#include "nlt/quadrature.hpp"
#include "nlt/specfun.hpp"

namespace nlt {

void NonlocalParams::validate() const {
    if (n < 2) throw DomainError("nonlocal operators require n >= 2");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("nonlocal operators require alpha in (0, 1)");
    if (!(split_h > 0.0 && split_h < 1.0)) throw DomainError("split_h must lie in (0, 1)");
}

std::shared_ptr<const KernelTable> NonlocalParams::kernel() const {
    return KernelTable::shared(KernelParams::for_transport(n, alpha));
}

KernelConstants kernel_constants(int n, double alpha) {
    NonlocalParams{n, alpha}.validate();
    using specfun::gamma;
    const double pi = std::numbers::pi;
    KernelConstants k{};
    k.c_na = gamma(0.5 * n - 1.0 + alpha) /
             (std::pow(pi, 0.5 * n) * std::pow(2.0, 2.0 - 2.0 * alpha) * gamma(1.0 - alpha));
    k.c_prime = std::pow(2.0, 2.0 * alpha - 1.0) * gamma(0.5 * n + alpha) /
                (std::sqrt(pi) * gamma(1.0 - alpha) * gamma(0.5 * (n + 1)));
    k.c_dprime = k.c_prime * specfun::sphere_area(n);
    k.riesz_C = -std::pow(2.0, 2.0 * alpha - 1.0) * gamma(0.5 * n + alpha) /
                (std::pow(pi, 0.5 * n) * gamma(1.0 - alpha));
    return k;
}

namespace {

using LambdaFn = std::function<double(double lambda, double d, bool above)>;

// Adaptive integral with an absolute floor tied to a coarse L1 estimate, so that
// sign-changing integrands with small net value still terminate.
quad::Result scaled_integral(const quad::Integrand& f, double a, double b,
                             std::span<const double> cuts, double rel, const char* what,
                             double abs_floor = 0.0) {
    if (!(b > a)) return {};
    quad::Tolerance tol{std::max(1e-300, abs_floor), rel, 20000, 1e-2 * rel};
    return quad::integrate_checked(f, a, b, tol, cuts, what);
}

// Doubling ladder lo * 2^j strictly inside (0, hi).
void add_ladder(std::vector<double>& c, double lo, double hi) {
    for (double x = lo; x < hi; x *= 2.0) c.push_back(x);
}

// int_lo^hi F(lambda, |1 - lambda|, lambda > 1) dlambda, with the window
// [1 - h, 1 + h] mapped through lambda = 1 -/+ s^3.
quad::Result graded_integral(const LambdaFn& F, double lo, double hi, double h,
                             const std::vector<double>& cuts, double rel, const char* what) {
    quad::Result total;
    auto add = [&](const quad::Result& r) {
        total.value += r.value;
        total.error += r.error;
        total.evaluations += r.evaluations;
    };
    auto within = [&](double a, double b) {
        std::vector<double> c;
        for (double x : cuts) {
            if (x > a && x < b) c.push_back(x);
        }
        return c;
    };
    // plain part below the window
    const double b1 = std::min(hi, 1.0 - h);
    if (b1 > lo) {
        auto c = within(lo, b1);
        add(scaled_integral([&](double l) { return F(l, 1.0 - l, false); }, lo, b1, c, rel, what));
    }
    // graded part below 1
    const double wl = std::max(lo, 1.0 - h);
    const double wh = std::min(hi, 1.0);
    if (wh > wl) {
        const double s_hi = std::cbrt(1.0 - wl);
        const double s_lo = std::cbrt(1.0 - wh);
        std::vector<double> c;
        for (double x : within(wl, wh)) c.push_back(std::cbrt(1.0 - x));
        for (int j = 1; j <= 6; ++j) c.push_back(s_hi * std::ldexp(1.0, -j));
        add(scaled_integral(
            [&](double s) {
                const double d = s * s * s;
                if (d <= 0.0) return 0.0;
                return 3.0 * s * s * F(1.0 - d, d, false);
            },
            s_lo, s_hi, c, rel, what));
    }
    // graded part above 1
    const double al = std::max(lo, 1.0);
    const double ah = std::min(hi, 1.0 + h);
    if (ah > al) {
        const double s_lo = std::cbrt(al - 1.0);
        const double s_hi = std::cbrt(ah - 1.0);
        std::vector<double> c;
        for (double x : within(al, ah)) c.push_back(std::cbrt(x - 1.0));
        for (int j = 1; j <= 6; ++j) c.push_back(s_hi * std::ldexp(1.0, -j));
        add(scaled_integral(
            [&](double s) {
                const double d = s * s * s;
                if (d <= 0.0) return 0.0;
                return 3.0 * s * s * F(1.0 + d, d, true);
            },
            s_lo, s_hi, c, rel, what));
    }
    // plain part above the window
    const double a2 = std::max(lo, 1.0 + h);
    if (hi > a2) {
        auto c = within(a2, hi);
        add(scaled_integral([&](double l) { return F(l, l - 1.0, true); }, a2, hi, c, rel, what));
    }
    return total;
}

double kernel_at(const KernelTable& t, int order, double d, bool above) {
    return above ? t.above(order, d) : t.below(order, d);
}

// Radii where the integrand changes character, expressed as lambda = rho / r.
std::vector<double> lambda_cuts(const RadialProfile& f, double r, double lam_max) {
    std::vector<double> c;
    for (double x : f.features()) {
        if (x / r < lam_max) c.push_back(x / r);
    }
    add_ladder(c, 0.25 * f.scale() / r, lam_max);
    c.push_back(f.tail_radius() / r);
    return c;
}

// f(r) - f(lambda r) with d = 1 - lambda. When the two values nearly cancel the
// gap is integrated from f' instead.
double profile_gap(const RadialProfile& f, double r, double lambda, double d) {
    const double a = f.value(r);
    const double b = f.value(lambda * r);
    const double direct = a - b;
    if (d >= 1e-4 && std::abs(direct) > 1e-3 * std::max(std::abs(a), std::abs(b))) return direct;
    const auto& gl = quad::gauss_legendre(16);
    const double lo = r - d * r;
    const double h = 0.5 * d * r;
    double acc = 0.0;
    for (int i = 0; i < 16; ++i) acc += gl.weights[i] * f.derivative(lo + h * (1.0 + gl.nodes[i]));
    return acc * h;
}

std::vector<double> outer_cuts(const RadialProfile& f, double r_max) {
    std::vector<double> c(f.features().begin(), f.features().end());
    add_ladder(c, 0.25 * f.scale(), r_max);
    c.push_back(f.tail_radius());
    return c;
}

}  // namespace

double radial_velocity(const RadialProfile& f, const NonlocalParams& p, double r) {
    p.validate();
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("radial_velocity requires r > 0");
    if (f.is_constant()) return 0.0;
    const auto table = p.kernel();
    const auto kc = kernel_constants(p.n, p.alpha);
    const double lam_max = f.tail_radius() / r;
    const auto cuts = lambda_cuts(f, r, lam_max);
    const int n = p.n;
    LambdaFn F = [&](double lambda, double d, bool above) {
        const double fp = f.derivative(r * lambda);
        if (fp == 0.0) return 0.0;
        return fp * std::pow(lambda, n) * kernel_at(*table, 0, d, above);
    };
    const auto res = graded_integral(F, 0.0, lam_max, p.split_h, cuts, p.inner_rel_tol,
                                     "radial velocity");
    return kc.c_prime * std::pow(r, 2.0 - 2.0 * p.alpha) * res.value;
}

double nonlinear_density(const RadialProfile& f, const NonlocalParams& p, double r) {
    const double fp = f.derivative(r);
    if (fp == 0.0) return 0.0;
    return fp * radial_velocity(f, p, r);
}

OracleResult direct_velocity_oracle(const RadialProfile& f, const NonlocalParams& p,
                                    std::span<const double> x, std::span<const double> eps) {
    p.validate();
    const int n = p.n;
    if (n != 2 && n != 3) throw DomainError("direct_velocity_oracle supports n = 2 or 3 only");
    if (static_cast<int>(x.size()) != n) throw DomainError("oracle point has wrong dimension");
    double xn = 0.0;
    for (double v : x) xn += v * v;
    xn = std::sqrt(xn);
    if (!(xn > 0.0)) throw DomainError("oracle point must be away from the origin");
    std::array<double, 3> eps_default{0.2, 0.1, 0.05};
    std::vector<double> e(eps.begin(), eps.end());
    if (e.empty()) e.assign(eps_default.begin(), eps_default.end());
    if (e.size() != 3) throw DomainError("oracle extrapolation uses exactly three radii");

    // Angular rule on the unit sphere: trapezoid in azimuth, Gauss-Legendre in cos(polar).
    std::vector<std::array<double, 3>> dirs;
    std::vector<double> wts;
    if (n == 2) {
        const int m = 256;
        for (int k = 0; k < m; ++k) {
            const double phi = 2.0 * std::numbers::pi * k / m;
            dirs.push_back({std::cos(phi), std::sin(phi), 0.0});
            wts.push_back(2.0 * std::numbers::pi / m);
        }
    } else {
        const int mt = 64, mp = 128;
        const auto& gl = quad::gauss_legendre(mt);
        for (int i = 0; i < mt; ++i) {
            const double ct = gl.nodes[i];
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            for (int k = 0; k < mp; ++k) {
                const double phi = 2.0 * std::numbers::pi * k / mp;
                dirs.push_back({st * std::cos(phi), st * std::sin(phi), ct});
                wts.push_back(gl.weights[i] * 2.0 * std::numbers::pi / mp);
            }
        }
    }
    // A_c(s) = int_S w_c f(|x + s w|) dw
    auto sphere_avg = [&](double s, int comp) {
        double acc = 0.0;
        for (std::size_t k = 0; k < dirs.size(); ++k) {
            double q = 0.0;
            for (int c = 0; c < n; ++c) {
                const double y = x[c] + s * dirs[k][c];
                q += y * y;
            }
            acc += wts[k] * dirs[k][comp] * f.value(std::sqrt(q));
        }
        return acc;
    };
    const auto kc = kernel_constants(n, p.alpha);
    const double s_max = xn + f.tail_radius();
    const double a2 = 2.0 * p.alpha;

    OracleResult out;
    out.u.assign(n, 0.0);
    std::vector<double> cuts{xn};
    for (double v : f.features()) {
        cuts.push_back(xn + v);
        if (xn > v) cuts.push_back(xn - v);
    }
    for (int j = -6; j <= 10; ++j) cuts.push_back(f.scale() * std::ldexp(1.0, j));
    // components that cancel by symmetry only need absolute accuracy
    const double floor = 1e-13 * f.sup_norm() * specfun::sphere_area(n) *
                         std::pow(std::max(e[2], 1e-3), -a2) * s_max;
    for (int c = 0; c < n; ++c) {
        std::array<double, 3> vals{};
        for (int i = 0; i < 3; ++i) {
            const auto r = scaled_integral(
                [&](double s) { return std::pow(s, -a2) * sphere_avg(s, c); }, e[i], s_max, cuts,
                1e-10, "oracle radial integral", floor);
            // u = C int (x - y)/|x - y|^{n+2a} f(y) dy, y = x + s w
            vals[i] = -kc.riesz_C * r.value;
        }
        // U(e) = U0 + b e^{2-2a} + c e^{4-2a}
        const double p1 = 2.0 - a2, p2 = 4.0 - a2;
        double m[3][4];
        for (int i = 0; i < 3; ++i) {
            m[i][0] = 1.0;
            m[i][1] = std::pow(e[i], p1);
            m[i][2] = std::pow(e[i], p2);
            m[i][3] = vals[i];
        }
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int r = col + 1; r < 3; ++r) {
                if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
            }
            std::swap(m[col], m[piv]);
            for (int r = 0; r < 3; ++r) {
                if (r == col) continue;
                const double fac = m[r][col] / m[col][col];
                for (int k = col; k < 4; ++k) m[r][k] -= fac * m[col][k];
            }
        }
        out.u[c] = m[0][3] / m[0][0];
        // two-radius estimate from the smallest radii as a consistency check
        const double two = vals[2] + (vals[2] - vals[1]) /
                                         (std::pow(e[1] / e[2], p1) - 1.0);
        out.extrapolation_error = std::max(out.extrapolation_error, std::abs(two - out.u[c]));
        if (out.by_epsilon.empty()) out.by_epsilon.assign(3, 0.0);
        for (int i = 0; i < 3; ++i) out.by_epsilon[i] += vals[i] * x[c] / xn;
    }
    double norm = 0.0;
    for (double v : out.u) norm += v * v;
    norm = std::sqrt(norm);
    if (!(out.extrapolation_error <= 1e-2 * std::max(norm, 1e-300)) && norm > 1e-14) {
        throw ConvergenceError("oracle extrapolation did not settle", out.extrapolation_error);
    }
    return out;
}

Estimate weighted_lhs(const RadialProfile& f, const NonlocalParams& p, Weight w) {
    p.validate();
    if (f.is_constant()) return {};
    const double omega = specfun::sphere_area(p.n);
    const double R = f.tail_radius();
    const auto cuts = outer_cuts(f, R);
    auto F = [&](double r) {
        const double fp = f.derivative(r);
        if (fp == 0.0) return 0.0;
        const double wt = w == Weight::exponential ? std::exp(-r) : 1.0;
        return fp * radial_velocity(f, p, r) * wt / r;
    };
    const auto res = scaled_integral(F, 0.0, R, cuts, p.outer_rel_tol, "weighted lhs");
    return {omega * res.value, omega * res.error};
}

double kernel_rho_derivative(const KernelTable& t, double rho, double r) {
    const int n = t.params().m;
    const double a = t.params().beta;
    if (!(rho > 0.0 && r > 0.0) || rho == r) throw DomainError("kernel derivative needs 0 < rho != r");
    if (rho < r) {
        const double l = rho / r;
        return std::pow(rho, n - 1) * std::pow(r, -n - 2.0 * a) * (n * t.g(l) + l * t.eval(1, l));
    }
    const double l = r / rho;
    return -2.0 * a * std::pow(rho, -1.0 - 2.0 * a) * t.g(l) -
           r * std::pow(rho, -2.0 - 2.0 * a) * t.eval(1, l);
}

double kernel_r_derivative(const KernelTable& t, double rho, double r) {
    const int n = t.params().m;
    const double a = t.params().beta;
    if (!(rho > 0.0 && r > 0.0) || rho == r) throw DomainError("kernel derivative needs 0 < rho != r");
    if (rho < r) {
        const double l = rho / r;
        return -n * (n + 2.0 * a) * std::pow(rho, n - 1) * std::pow(r, -n - 1.0 - 2.0 * a) * t.g(l) -
               (2.0 * n + 1.0 + 2.0 * a) * std::pow(rho, n) * std::pow(r, -n - 2.0 - 2.0 * a) *
                   t.eval(1, l) -
               std::pow(rho, n + 1) * std::pow(r, -n - 3.0 - 2.0 * a) * t.eval(2, l);
    }
    const double l = r / rho;
    return -(1.0 + 2.0 * a) * std::pow(rho, -2.0 - 2.0 * a) * t.eval(1, l) -
           r * std::pow(rho, -3.0 - 2.0 * a) * t.eval(2, l);
}

namespace {

// int_0^inf dr W(r) int_0^1 K(r, lambda, d) dlambda with a closed-form tail past r_max.
Estimate outer_inner(const RadialProfile& f, const NonlocalParams& p, double r_max,
                     const std::function<double(double r, double lambda, double d)>& K,
                     const char* what) {
    const auto cuts = outer_cuts(f, r_max);
    auto inner = [&](double r) {
        const auto lc = lambda_cuts(f, r, 1.0);
        LambdaFn F = [&](double lambda, double d, bool) { return K(r, lambda, d); };
        return graded_integral(F, 0.0, 1.0, p.split_h, lc, p.inner_rel_tol, what).value;
    };
    const auto res = scaled_integral(inner, 0.0, r_max, cuts, p.outer_rel_tol, what);
    return {res.value, res.error};
}

double tail_moment_Q(const RadialProfile& f) {
    const double fR = f.value(f.tail_radius());
    std::vector<double> cuts(f.features().begin(), f.features().end());
    const auto r = scaled_integral(
        [&](double t) {
            const double d = f.value(t) - fR;
            return std::exp(-t) * d * d;
        },
        0.0, f.tail_radius(), cuts, 1e-12, "tail moment");
    return r.value;
}

}  // namespace

Estimate double_integral_I(const RadialProfile& f, const NonlocalParams& p) {
    p.validate();
    if (f.is_constant()) return {};
    const auto table = p.kernel();
    const int n = p.n;
    const double a = p.alpha;
    const double r_max = 1e3 * std::max(1.0, f.tail_radius());
    auto K = [&](double r, double lambda, double d) {
        const double gap = profile_gap(f, r, lambda, d);
        if (gap == 0.0) return 0.0;
        const double g = table->below(0, d);
        const double g1 = table->below(1, d);
        const double t1 = std::exp(-r) * std::pow(lambda, n - 1) * (n * g + lambda * g1);
        const double t2 = std::exp(-lambda * r) * (2.0 * a * g + lambda * g1);
        return std::pow(r, -2.0 * a) * gap * gap * (t1 - t2);
    };
    auto body = outer_inner(f, p, r_max, K, "double integral I");
    // r > r_max: only the second region survives, ~ 2a G(0) Q / r^{1+2a}
    const double tail = -table->g(0.0) * tail_moment_Q(f) * std::pow(r_max, -2.0 * a);
    body.value += tail;
    body.error += 1e-6 * std::abs(tail);
    return body;
}

Estimate dropped_term_N(const RadialProfile& f, const NonlocalParams& p) {
    p.validate();
    if (f.is_constant()) return {};
    const auto table = p.kernel();
    const auto kc = kernel_constants(p.n, p.alpha);
    const int n = p.n;
    const double a = p.alpha;
    const double r_max = 1e3 * std::max(1.0, f.tail_radius());
    auto K = [&](double r, double lambda, double d) {
        const double gap = profile_gap(f, r, lambda, d);
        if (gap == 0.0) return 0.0;
        const double g = table->below(0, d);
        const double g1 = table->below(1, d);
        const double g2 = table->below(2, d);
        const double t1 = std::exp(-r) * (n * (n + 2.0 * a) * std::pow(lambda, n - 1) * g +
                                          (2.0 * n + 1.0 + 2.0 * a) * std::pow(lambda, n) * g1 +
                                          std::pow(lambda, n + 1) * g2);
        const double t2 = std::exp(-lambda * r) * ((1.0 + 2.0 * a) * g1 + lambda * g2);
        return std::pow(r, -1.0 - 2.0 * a) * gap * gap * (t1 + t2);
    };
    auto body = outer_inner(f, p, r_max, K, "dropped term");
    return {0.5 * kc.c_dprime * body.value, 0.5 * kc.c_dprime * body.error};
}

}  // namespace nlt
