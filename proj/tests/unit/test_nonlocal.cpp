#include <doctest.h>

#include <cmath>

#include "nlt/errors.hpp"
#include "nlt/inequality.hpp"
#include "nlt/kernel_table.hpp"
#include "nlt/nonlocal.hpp"
#include "nlt/specfun.hpp"

using namespace nlt;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}

TEST_CASE("kernel constants") {
    for (int n : {2, 3, 4})
        for (double a : {0.25, 0.5, 0.75}) {
            const auto k = kernel_constants(n, a);
            CHECK(rel(k.c_dprime, k.c_prime * specfun::sphere_area(n)) <= 1e-15);
            CHECK(k.c_prime > 0.0);
            CHECK(k.riesz_C < 0.0);
        }
    // the alpha = 1/2, n = 2 velocity law is the Riesz transform: c' = 1/pi
    CHECK(rel(kernel_constants(2, 0.5).c_prime, 1.0 / 3.141592653589793) <= 1e-14);
}

TEST_CASE("constant profile has zero velocity and density") {
    const auto c = constant_profile(2.0);
    const NonlocalParams p{2, 0.5};
    for (double r : {0.1, 1.0, 3.0}) {
        CHECK(radial_velocity(c, p, r) == 0.0);
        CHECK(nonlinear_density(c, p, r) == 0.0);
    }
    CHECK(weighted_lhs(c, p, Weight::plain).value == 0.0);
    CHECK(double_integral_I(c, p).value == 0.0);
    const double x[] = {1.0, 0.0};
    const auto o = direct_velocity_oracle(c, p, x);
    CHECK(std::abs(o.u[0]) <= 1e-14);
    CHECK(std::abs(o.u[1]) <= 1e-14);
}

TEST_CASE("velocity vanishes at the origin") {
    const auto f = gaussian_profile(1.0);
    for (double a : {0.25, 0.5, 0.75}) {
        const NonlocalParams p{2, a};
        const double u1 = std::abs(radial_velocity(f, p, 1e-2));
        const double u2 = std::abs(radial_velocity(f, p, 1e-3));
        CHECK(u2 < 0.2 * u1);
        CHECK(u2 < 1e-2);
    }
}

TEST_CASE("nonlinear density is the product f' u") {
    const auto f = gaussian_profile(1.0);
    const NonlocalParams p{2, 0.5};
    CHECK(rel(nonlinear_density(f, p, 1.0), f.derivative(1.0) * radial_velocity(f, p, 1.0)) <= 1e-15);
}

TEST_CASE("oracle equivalence on the gaussian") {
    const auto f = gaussian_profile(1.0);
    const NonlocalParams p{2, 0.25};
    const double u = radial_velocity(f, p, 1.0);
    const double x[] = {1.0, 0.0};
    const auto o = direct_velocity_oracle(f, p, x);
    CHECK(rel(o.u[0], u) <= 1e-4);
    CHECK(std::abs(o.u[1]) <= 1e-6 * std::abs(o.u[0]));
    const double y[] = {0.0, 1.0};
    const auto t = direct_velocity_oracle(f, p, y);
    CHECK(std::abs(t.u[0]) <= 1e-6 * std::abs(t.u[1]));
    CHECK(rel(t.u[1], u) <= 1e-4);
    const double z[] = {0.0, 0.0, 0.0, 1.0};
    CHECK_THROWS_AS(direct_velocity_oracle(f, NonlocalParams{4, 0.5}, z), DomainError);
}

TEST_CASE("kernel derivative sign and boundary limit") {
    for (int n : {2, 3})
        for (double a : {0.25, 0.5, 0.75}) {
            const auto t = KernelTable::shared(KernelParams::for_transport(n, a));
            for (double rho : {0.2, 1.0, 3.0})
                for (double r : {0.1, 0.5, 2.0, 5.0})
                    if (rho != r) CHECK(kernel_r_derivative(*t, rho, r) < 0.0);
            const double rho = 1.3, r = 1e-6;
            const double limit = -2 * a * specfun::beta(0.5, (n + 1) / 2.0) * std::pow(rho, -1 - 2 * a);
            CHECK(rel(kernel_rho_derivative(*t, rho, r), limit) <= 1e-5);
        }
}

TEST_CASE("weighted identity closes") {
    const auto f = gaussian_profile(1.0);
    for (double a : {0.25, 0.5, 0.75}) {
        const NonlocalParams p{2, a};
        const auto k = kernel_constants(2, a);
        const double Cp = constant_bundle(2, a).C_prime;
        const double lhs = weighted_lhs(f, p, Weight::exponential).value;
        const double R = functional_R(f, 2, a).value;
        const double I = double_integral_I(f, p).value;
        const double N = dropped_term_N(f, p).value;
        CHECK(N >= 0.0);
        CHECK(std::abs(lhs - (2 * Cp * R + 0.5 * k.c_dprime * I + N)) <= 1e-8 * std::abs(lhs));
    }
}

TEST_CASE("plain weighted lhs dominates the R functional") {
    const NonlocalParams p{2, 0.5};
    const auto f = gaussian_profile(1.0);
    CHECK(weighted_lhs(f, p, Weight::plain).value >= prop31_constant(2, 0.5) * functional_R(f, 2, 0.5).value);
    const NonlocalParams q{3, 0.75};
    CHECK(std::isfinite(weighted_lhs(f, q, Weight::exponential).value));
}

TEST_CASE("I is bounded below by the sub-critical series bound") {
    const NonlocalParams p{2, 0.25};
    const auto f = gaussian_profile(1.0);
    const auto b = constant_bundle(2, 0.25);
    const double I = double_integral_I(f, p).value;
    CHECK(I >= -4 * specfun::gamma(0.5) * b.sums.S0->value * f.sup_norm() * f.sup_norm());
}
