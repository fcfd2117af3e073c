#include "nlt/radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nlt/errors.hpp"
#include "nlt/quadrature.hpp"
#include "nlt/specfun.hpp"

namespace nlt {

struct RadialProfile::Impl {
    Kind kind = Kind::analytic;
    std::string name;
    double sup = 0.0;
    double r_tail = 1.0;
    double t_tol = 0.0;
    double scale = 1.0;
    bool constant = false;
    std::vector<double> features;
    // analytic
    Fn value;
    Fn derivative;
    // sampled
    std::vector<double> r, f, fp;

    double eval(double x, bool deriv) const;
};

namespace {

// Cubic Hermite piece on [r0, r1] at x; returns value or derivative.
double hermite(double r0, double r1, double f0, double f1, double d0, double d1, double x,
               bool deriv) {
    const double h = r1 - r0;
    const double t = (x - r0) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    if (!deriv) {
        return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * f1 +
               (t3 - t2) * h * d1;
    }
    return ((6 * t2 - 6 * t) * f0 + (3 * t2 - 4 * t + 1) * h * d0 + (-6 * t2 + 6 * t) * f1 +
            (3 * t2 - 2 * t) * h * d1) /
           h;
}

std::vector<double> monotone_slopes(const std::vector<double>& r, const std::vector<double>& f) {
    const std::size_t n = r.size();
    std::vector<double> d(n, 0.0);
    std::vector<double> del(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) del[i] = (f[i + 1] - f[i]) / (r[i + 1] - r[i]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (del[i - 1] * del[i] <= 0.0) continue;
        const double h0 = r[i] - r[i - 1];
        const double h1 = r[i + 1] - r[i];
        const double w1 = 2 * h1 + h0;
        const double w2 = h1 + 2 * h0;
        d[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
    }
    // Radial symmetry: zero slope at the origin. Last node: one-sided, limited.
    d[0] = 0.0;
    if (n >= 2) {
        const double e = del[n - 2];
        d[n - 1] = (e * d[n - 2] > 0.0) ? std::min(std::abs(e), std::abs(d[n - 2])) * (e > 0 ? 1 : -1)
                                        : 0.0;
    }
    return d;
}

// Largest |value| attained by a Hermite piece (endpoints and interior critical points).
double piece_max(double r0, double r1, double f0, double f1, double d0, double d1) {
    double m = std::max(std::abs(f0), std::abs(f1));
    const double h = r1 - r0;
    // p'(t) * h = a t^2 + b t + c
    const double a = 6 * f0 + 3 * h * d0 - 6 * f1 + 3 * h * d1;
    const double b = -6 * f0 - 4 * h * d0 + 6 * f1 - 2 * h * d1;
    const double c = h * d0;
    auto probe = [&](double t) {
        if (t > 0.0 && t < 1.0) m = std::max(m, std::abs(hermite(r0, r1, f0, f1, d0, d1, r0 + t * h, false)));
    };
    if (std::abs(a) < 1e-300) {
        if (b != 0.0) probe(-c / b);
    } else {
        const double disc = b * b - 4 * a * c;
        if (disc >= 0.0) {
            const double s = std::sqrt(disc);
            probe((-b + s) / (2 * a));
            probe((-b - s) / (2 * a));
        }
    }
    return m;
}

}  // namespace

double RadialProfile::Impl::eval(double x, bool deriv) const {
    if (!(x >= 0.0)) throw DomainError("radial profile evaluated at negative radius");
    if (kind == Kind::analytic) return deriv ? derivative(x) : value(x);
    if (x >= r.back()) return deriv ? 0.0 : f.back();
    const auto it = std::upper_bound(r.begin(), r.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - r.begin()) - 1;
    return hermite(r[i], r[i + 1], f[i], f[i + 1], fp[i], fp[i + 1], x, deriv);
}

RadialProfile RadialProfile::analytic(std::string name, Fn value, Fn derivative, double sup_norm,
                                      double tail_radius, double tail_tol, double scale,
                                      std::vector<double> features) {
    if (!(tail_radius > 0.0) || !(scale > 0.0) || !(sup_norm >= 0.0) || !(tail_tol >= 0.0)) {
        throw DomainError("invalid decay certificate for analytic profile");
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::analytic;
    impl->name = std::move(name);
    impl->value = std::move(value);
    impl->derivative = std::move(derivative);
    impl->sup = sup_norm;
    impl->r_tail = tail_radius;
    impl->t_tol = tail_tol;
    impl->scale = scale;
    std::sort(features.begin(), features.end());
    impl->features = std::move(features);
    return RadialProfile(std::move(impl));
}

RadialProfile RadialProfile::sampled(std::vector<double> r, std::vector<double> f,
                                     std::vector<double> fprime, std::string name) {
    if (r.size() < 2 || r.size() != f.size()) {
        throw DomainError("sampled profile needs matching r and f with at least two nodes");
    }
    if (!fprime.empty() && fprime.size() != r.size()) {
        throw DomainError("sampled profile fprime length mismatch");
    }
    if (r.front() != 0.0) throw DomainError("sampled profile must start at r = 0");
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        if (!(r[i + 1] > r[i])) throw DomainError("sampled profile radii must increase strictly");
    }
    for (double v : f) {
        if (!std::isfinite(v)) throw DomainError("sampled profile values must be finite");
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::sampled;
    impl->name = std::move(name);
    impl->fp = fprime.empty() ? monotone_slopes(r, f) : std::move(fprime);
    impl->r = std::move(r);
    impl->f = std::move(f);
    const auto& R = impl->r;
    const auto& F = impl->f;
    const auto& D = impl->fp;
    double sup = 0.0;
    bool constant = true;
    for (std::size_t i = 0; i + 1 < R.size(); ++i) {
        sup = std::max(sup, piece_max(R[i], R[i + 1], F[i], F[i + 1], D[i], D[i + 1]));
        if (F[i] != F[0] || D[i] != 0.0) constant = false;
    }
    if (F.back() != F[0] || D.back() != 0.0) constant = false;
    impl->sup = sup;
    impl->constant = constant;
    impl->r_tail = R.back();
    impl->t_tol = 0.0;  // exact constant extension
    double h = R[1] - R[0];
    impl->scale = std::max(10.0 * h, R.back() * 1e-3);
    // Joins are C^1, so adaptive panels find them; a sparse subset seeds the panels.
    const std::size_t stride = std::max<std::size_t>(1, (R.size() - 1) / 64);
    for (std::size_t i = stride; i + 1 < R.size(); i += stride) impl->features.push_back(R[i]);
    impl->features.push_back(R.back());
    return RadialProfile(std::move(impl));
}

RadialProfile::Kind RadialProfile::kind() const { return impl_->kind; }
const std::string& RadialProfile::name() const { return impl_->name; }
double RadialProfile::value(double r) const { return impl_->eval(r, false); }
double RadialProfile::derivative(double r) const { return impl_->eval(r, true); }
double RadialProfile::sup_norm() const { return impl_->sup; }
double RadialProfile::tail_radius() const { return impl_->r_tail; }
double RadialProfile::tail_tol() const { return impl_->t_tol; }
double RadialProfile::scale() const { return impl_->scale; }
std::span<const double> RadialProfile::features() const { return impl_->features; }
bool RadialProfile::is_constant() const { return impl_->constant; }

RadialProfile RadialProfile::scaled(double c) const {
    auto impl = std::make_shared<Impl>(*impl_);
    impl->name = impl_->name + "*" + std::to_string(c);
    impl->sup = std::abs(c) * impl_->sup;
    impl->t_tol = std::abs(c) * impl_->t_tol;
    if (impl->kind == Kind::analytic) {
        auto v = impl_->value;
        auto d = impl_->derivative;
        impl->value = [v, c](double r) { return c * v(r); };
        impl->derivative = [d, c](double r) { return c * d(r); };
    } else {
        for (auto& x : impl->f) x *= c;
        for (auto& x : impl->fp) x *= c;
    }
    return RadialProfile(std::move(impl));
}

RadialProfile RadialProfile::resampled(std::span<const double> r) const {
    std::vector<double> rr(r.begin(), r.end());
    std::vector<double> ff(rr.size()), dd(rr.size());
    for (std::size_t i = 0; i < rr.size(); ++i) {
        ff[i] = value(rr[i]);
        dd[i] = derivative(rr[i]);
    }
    return sampled(std::move(rr), std::move(ff), std::move(dd), name() + "@sampled");
}

RadialProfile gaussian_profile(double a) {
    if (!(a > 0.0)) throw DomainError("gaussian_profile requires a > 0");
    const double tail_tol = 1e-17;
    const double R = std::sqrt(std::log(1.0 / tail_tol) / a);
    return RadialProfile::analytic(
        "gaussian", [a](double r) { return std::exp(-a * r * r); },
        [a](double r) { return -2.0 * a * r * std::exp(-a * r * r); }, 1.0, R, tail_tol,
        1.0 / std::sqrt(a));
}

RadialProfile bump_profile(double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("bump_profile requires delta > 0");
    const double d = delta;
    // Logistic form of e^{-a} / (e^{-a} + e^{-b}) with a = 1/(2d - r), b = 1/(r - d).
    auto value = [d](double r) {
        if (r <= d) return 1.0;
        if (r >= 2.0 * d) return 0.0;
        const double e = 1.0 / (2.0 * d - r) - 1.0 / (r - d);
        if (e > 700.0) return 0.0;
        return 1.0 / (1.0 + std::exp(e));
    };
    auto deriv = [d](double r) {
        if (r <= d || r >= 2.0 * d) return 0.0;
        const double p = 2.0 * d - r;
        const double q = r - d;
        const double e = 1.0 / p - 1.0 / q;
        if (std::abs(e) > 1400.0) return 0.0;
        const double ep = 1.0 / (p * p) + 1.0 / (q * q);
        const double c = std::cosh(0.5 * e);
        return -ep / (4.0 * c * c);
    };
    return RadialProfile::analytic("bump", value, deriv, 1.0, 2.0 * d, 0.0, d,
                                   {d, 1.5 * d, 2.0 * d});
}

RadialProfile oscillatory_profile(double a, double k) {
    if (!(a > 0.0) || !std::isfinite(k)) throw DomainError("oscillatory_profile requires a > 0");
    const double tail_tol = 1e-17;
    const double R = std::sqrt(std::log(1.0 / tail_tol) / a);
    double scale = 1.0 / std::sqrt(a);
    if (k != 0.0) scale = std::min(scale, 1.0 / std::abs(k));
    std::vector<double> features;
    if (k != 0.0) {
        // zeros of cos(k r) split the oscillations
        for (int j = 0;; ++j) {
            const double z = (j + 0.5) * M_PI / std::abs(k);
            if (z >= R) break;
            features.push_back(z);
        }
    }
    return RadialProfile::analytic(
        "oscillatory", [a, k](double r) { return std::exp(-a * r * r) * std::cos(k * r); },
        [a, k](double r) {
            return std::exp(-a * r * r) * (-2.0 * a * r * std::cos(k * r) - k * std::sin(k * r));
        },
        1.0, R, tail_tol, scale, std::move(features));
}

RadialProfile constant_profile(double c) {
    return RadialProfile::sampled({0.0, 1.0}, {c, c}, {0.0, 0.0}, "constant");
}

std::vector<double> GridSpec::nodes() const {
    if (!(r_max > 0.0) || n_cells < 1) throw DomainError("grid needs r_max > 0 and n_cells >= 1");
    std::vector<double> r(static_cast<std::size_t>(n_cells) + 1);
    r[0] = 0.0;
    if (grading == Grading::uniform) {
        for (int i = 1; i <= n_cells; ++i) r[i] = r_max * i / n_cells;
        return r;
    }
    if (!(ratio >= 1.0) || !(stretch_cap >= 1.0)) throw DomainError("geometric grid needs ratio, cap >= 1");
    std::vector<double> w(n_cells);
    double g = 1.0;
    double total = 0.0;
    for (int i = 0; i < n_cells; ++i) {
        w[i] = g;
        total += g;
        g = std::min(g * ratio, stretch_cap);
    }
    double acc = 0.0;
    for (int i = 0; i < n_cells; ++i) {
        acc += w[i];
        r[i + 1] = r_max * acc / total;
    }
    r[n_cells] = r_max;
    return r;
}

Estimate profile_integral(const RadialProfile& f,
                          const std::function<double(double, double)>& integrand,
                          const std::function<double(double, double)>& tail,
                          double tail_weight_bound, double rel_tol) {
    const double f0 = f.value(0.0);
    const double R = f.tail_radius();
    const double s = f.scale();
    std::vector<double> cuts(f.features().begin(), f.features().end());
    for (int j = 1; j <= 30; ++j) cuts.push_back(s * std::ldexp(1.0, -j));
    for (double x = s; x < R; x *= 2.0) cuts.push_back(x);
    // Near the origin f(0) - f(r) is replaced by the midpoint Taylor form r * (-f'(r/2)).
    const double r_reg = 1e-5 * s;
    auto F = [&](double r) {
        const double diff = r < r_reg ? -r * f.derivative(0.5 * r) : f0 - f.value(r);
        return integrand(r, diff);
    };
    quad::Tolerance tol{1e-300, rel_tol, 20000};
    const auto res = quad::integrate_checked(F, 0.0, R, tol, cuts, "radial functional");
    const double diff_r = f0 - f.value(R);
    Estimate out;
    out.value = res.value + tail(R, diff_r);
    const double t = f.tail_tol();
    out.error = res.error + t * (2.0 * (f.sup_norm() + t)) * tail_weight_bound;
    return out;
}

Estimate functional_J(const RadialProfile& f, int n, double rel_tol) {
    const double omega = specfun::sphere_area(n);
    if (f.is_constant()) return {};
    const double R = f.tail_radius();
    auto e = profile_integral(
        f, [](double r, double diff) { return diff * std::exp(-r) / r; },
        [](double Rr, double diff) { return diff * specfun::expint_e1(Rr); },
        specfun::expint_e1(R), rel_tol);
    return {omega * e.value, omega * e.error};
}

Estimate functional_R(const RadialProfile& f, int n, double alpha, double rel_tol) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("functional_R requires alpha in (0, 1)");
    const double omega = specfun::sphere_area(n);
    if (f.is_constant()) return {};
    // Convergence at the origin needs (f(0) - f(r))^2 = o(r^{2 alpha}).
    const double s = f.scale();
    const double f0 = f.value(0.0);
    const double r1 = 1e-6 * s;
    const double r2 = 1e-8 * s;
    const double q1 = std::pow(f0 - f.value(r1), 2) / std::pow(r1, 2 * alpha);
    const double q2 = std::pow(f0 - f.value(r2), 2) / std::pow(r2, 2 * alpha);
    if (q2 > 1e-6 * std::max(1.0, f.sup_norm() * f.sup_norm()) && q2 >= 0.5 * q1) {
        throw DomainError("functional_R diverges: f(0) - f(r) does not vanish fast enough at 0");
    }
    const double R = f.tail_radius();
    const double p = 1.0 + 2.0 * alpha;
    auto e = profile_integral(
        f, [p](double r, double diff) { return diff * diff / std::pow(r, p); },
        [alpha](double Rr, double diff) { return diff * diff * std::pow(Rr, -2 * alpha) / (2 * alpha); },
        std::pow(R, -2 * alpha) / (2 * alpha), rel_tol);
    return {omega * e.value, omega * e.error};
}

YoungResult young_check(const RadialProfile& f, double alpha, double eps, int which) {
    if (!(eps > 0.0)) throw DomainError("young_check requires eps > 0");
    const double M = f.sup_norm();
    YoungResult out;
    auto sq = [](double v) { return v * v; };
    if (which == 1) {
        if (!(alpha > 0.5 && alpha < 1.0)) throw DomainError("first Young bound requires 1/2 < alpha < 1");
        const double a2 = 2.0 * alpha;
        const auto lhs = profile_integral(
            f, [&](double r, double d) { return sq(d) / std::pow(r, a2); },
            [&](double R, double d) { return sq(d) * std::pow(R, 1.0 - a2) / (a2 - 1.0); },
            std::pow(f.tail_radius(), 1.0 - a2) / (a2 - 1.0));
        const auto rr = profile_integral(
            f, [&](double r, double d) { return sq(d) / std::pow(r, 1.0 + a2); },
            [&](double R, double d) { return sq(d) * std::pow(R, -a2) / a2; },
            std::pow(f.tail_radius(), -a2) / a2);
        out.lhs = lhs.value;
        out.rhs = eps * rr.value + (1.0 / ((2.0 - a2) * eps) + 4.0 / (a2 - 1.0)) * M * M;
    } else if (which == 2 || which == 3) {
        const auto r2 = profile_integral(
            f, [&](double r, double d) { return sq(d) / (r * r); },
            [&](double R, double d) { return sq(d) / R; }, 1.0 / f.tail_radius());
        Estimate lhs;
        if (which == 2) {
            lhs = profile_integral(
                f, [&](double r, double d) { return sq(d) * std::exp(-0.5 * r) / r; },
                [&](double R, double d) { return sq(d) * specfun::expint_e1(0.5 * R); },
                specfun::expint_e1(0.5 * f.tail_radius()));
            out.rhs = eps * r2.value + (8.0 + 1.0 / eps) * M * M;
        } else {
            auto tail_w = [](double R) {
                return 1.0 / R - (std::exp(-0.5 * R) / R - 0.5 * specfun::expint_e1(0.5 * R));
            };
            lhs = profile_integral(
                f, [&](double r, double d) { return sq(d) * (-std::expm1(-0.5 * r)) / (r * r); },
                [&](double R, double d) { return sq(d) * tail_w(R); }, tail_w(f.tail_radius()));
            out.rhs = eps * r2.value + (4.0 + 1.0 / (4.0 * eps)) * M * M;
        }
        out.lhs = lhs.value;
    } else {
        throw DomainError("young_check: which must be 1, 2 or 3");
    }
    out.holds = out.lhs <= out.rhs + 1e-10 * (1.0 + std::abs(out.rhs));
    return out;
}

void write_profile_csv(const std::string& path, const RadialProfile& f, std::span<const double> r) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << "r,f,fprime\n";
    char buf[128];
    for (double x : r) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x, f.value(x) + 0.0, f.derivative(x) + 0.0);
        os << buf;
    }
}

RadialProfile read_profile_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty profile file " + path);
    const bool has_fp = line.find("fprime") != std::string::npos;
    std::vector<double> r, f, fp;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() < 2) throw std::runtime_error("malformed profile row in " + path);
        r.push_back(row[0]);
        f.push_back(row[1]);
        if (has_fp) {
            if (row.size() < 3) throw std::runtime_error("missing fprime in " + path);
            fp.push_back(row[2]);
        }
    }
    return RadialProfile::sampled(std::move(r), std::move(f), std::move(fp), path);
}

}  // namespace nlt
