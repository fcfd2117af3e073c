#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "nlt/errors.hpp"
#include "nlt/radial.hpp"
#include "nlt/specfun.hpp"

using namespace nlt;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<double> uniform(double hi, int cells) {
    std::vector<double> r(cells + 1);
    for (int i = 0; i <= cells; ++i) r[i] = hi * i / cells;
    return r;
}
}  // namespace

TEST_CASE("gaussian profile") {
    const auto f = gaussian_profile(1.0);
    CHECK(f.value(0.0) == 1.0);
    CHECK(f.derivative(0.0) == 0.0);
    CHECK(rel(f.value(2.0), std::exp(-4.0)) <= 1e-15);
    CHECK(rel(f.derivative(0.7), -1.4 * std::exp(-0.49)) <= 1e-15);
    CHECK(f.sup_norm() == 1.0);
    CHECK(std::abs(f.value(f.tail_radius())) <= f.tail_tol());
}

TEST_CASE("bump profile") {
    const double d = 0.05;
    const auto f = bump_profile(d);
    CHECK(f.value(d / 2) == 1.0);
    CHECK(f.value(3 * d) == 0.0);
    CHECK(std::abs(f.value(1.5 * d) - 0.5) <= 1e-14);
    double prev = 1.0;
    for (double r = 0.0; r <= 2.5 * d; r += d / 97) {
        const double v = f.value(r);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(v <= prev);
        prev = v;
    }
    // one-sided derivatives vanish at the joins
    CHECK(std::abs(f.derivative(d * (1 + 1e-3))) <= 1e-12);
    CHECK(std::abs(f.derivative(2 * d * (1 - 1e-3))) <= 1e-12);
    CHECK(f.derivative(1.5 * d) < 0.0);
}

TEST_CASE("oscillatory and constant profiles") {
    const auto f = oscillatory_profile(0.5, 4.0);
    CHECK(rel(f.value(1.0), std::exp(-0.5) * std::cos(4.0)) <= 1e-15);
    const auto c = constant_profile(3.0);
    CHECK(c.is_constant());
    CHECK(c.derivative(1.0) == 0.0);
    CHECK(c.sup_norm() == 3.0);
}

TEST_CASE("grid nodes") {
    GridSpec u{2.0, 8};
    const auto r = u.nodes();
    CHECK(r.size() == 9);
    CHECK(r.front() == 0.0);
    CHECK(r.back() == 2.0);
    GridSpec g{1.0, 200, GridSpec::Grading::geometric, 1.05, 20.0};
    const auto q = g.nodes();
    CHECK(q.back() == 1.0);
    for (std::size_t i = 1; i < q.size(); ++i) CHECK(q[i] > q[i - 1]);
    const double w0 = q[1] - q[0];
    double wmax = 0.0;
    for (std::size_t i = 1; i < q.size(); ++i) wmax = std::max(wmax, q[i] - q[i - 1]);
    CHECK(wmax <= 20.0 * w0 * (1 + 1e-9));
}

TEST_CASE("functional J") {
    CHECK(functional_J(constant_profile(2.0), 2).value == 0.0);
    const double omega = specfun::sphere_area(2);
    for (double d : {0.01, 0.05, 0.1})
        CHECK(functional_J(bump_profile(d), 2).value >= omega / std::numbers::e * std::log(1.0 / (2 * d)));
    // 30-digit reference quadrature
    const auto J = functional_J(gaussian_profile(1.0), 2);
    CHECK(J.value > 0.0);
    CHECK(rel(J.value, 2.5450456505353436) <= 1e-11);
}

TEST_CASE("functional R") {
    CHECK(functional_R(constant_profile(1.0), 2, 0.5).value == 0.0);
    const auto f = gaussian_profile(1.0);
    const double R = functional_R(f, 2, 0.5).value;
    CHECK(R > 0.0);
    // omega int (1 - e^{-r^2})^2 / r^2 dr = 2 pi * sqrt(pi) (2 - sqrt 2)
    CHECK(rel(R, 2 * std::numbers::pi * std::sqrt(std::numbers::pi) * (2 - std::sqrt(2.0))) <= 1e-9);
    CHECK(rel(functional_R(f.scaled(2.0), 2, 0.5).value, 4 * R) <= 1e-10);
}

TEST_CASE("sampled and analytic representations agree") {
    const auto f = gaussian_profile(1.0);
    const auto s = f.resampled(uniform(8.0, 800));
    CHECK(s.kind() == RadialProfile::Kind::sampled);
    CHECK(rel(functional_J(s, 3).value, functional_J(f, 3).value) <= 1e-6);
    CHECK(rel(functional_R(s, 3, 0.25).value, functional_R(f, 3, 0.25).value) <= 1e-6);
}

TEST_CASE("monotone sampled interpolation keeps the data range") {
    const std::vector<double> r{0, 1, 2, 3, 4}, v{1, 1, 0.2, 0, 0};
    const auto s = RadialProfile::sampled(r, v);
    for (double x = 0; x <= 4.5; x += 0.01) {
        CHECK(s.value(x) <= 1.0 + 1e-15);
        CHECK(s.value(x) >= -1e-15);
    }
}

TEST_CASE("profile csv round trip") {
    const auto path = std::filesystem::temp_directory_path() / "nlt_profile_roundtrip.csv";
    const auto f = oscillatory_profile(0.5, 2.0);
    const auto r = uniform(8.0, 400);
    write_profile_csv(path.string(), f, r);
    const auto g = read_profile_csv(path.string());
    for (double x : {0.0, 0.5, 1.234, 3.0}) CHECK(std::abs(g.value(x) - f.value(x)) <= 1e-7);
    std::filesystem::remove(path);
    CHECK_THROWS(read_profile_csv("/nonexistent/profile.csv"));
}

TEST_CASE("young-type inequalities") {
    const std::vector<RadialProfile> profiles{gaussian_profile(0.5), gaussian_profile(1.0), gaussian_profile(2.0),
                                              bump_profile(0.05), bump_profile(0.1),
                                              oscillatory_profile(0.5, 4.0)};
    for (const auto& f : profiles)
        for (double eps : {0.01, 0.1, 1.0, 10.0}) {
            for (double a : {0.6, 0.75, 0.9}) CHECK(young_check(f, a, eps, 1).holds);
            CHECK(young_check(f, 0.5, eps, 2).holds);
            CHECK(young_check(f, 0.5, eps, 3).holds);
        }
    const auto c = young_check(constant_profile(1.0), 0.75, 1.0, 1);
    CHECK(c.lhs == 0.0);
    CHECK(c.holds);
    CHECK_THROWS_AS(young_check(gaussian_profile(1.0), 0.25, 1.0, 1), DomainError);
}
