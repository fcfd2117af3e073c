#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlt/errors.hpp"
#include "nlt/gkernel.hpp"
#include "nlt/specfun.hpp"

using namespace nlt;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
constexpr double pi = std::numbers::pi;
}

TEST_CASE("taylor coefficients") {
    CHECK(rel(taylor_coeff({2, 0.5}, 0), pi / 2) <= 1e-14);
    CHECK(rel(taylor_coeff({2, 0.5}, 1), 3 * pi / 16) <= 1e-14);
    CHECK(rel(taylor_coeff({3, 0.25}, 0), 4.0 / 3.0) <= 1e-14);
    for (int m : {2, 3, 5})
        for (double b : {0.1, 0.5, 0.9})
            for (long long k : {0LL, 1LL, 10LL, 60LL, 1000LL, 100000LL}) CHECK(taylor_coeff({m, b}, k) > 0.0);
}

TEST_CASE("coefficient ratio limit") {
    CHECK(rel(coeff_ratio_limit({2, 0.5}), 1.0) <= 1e-14);
    CHECK(rel(coeff_ratio_limit({4, 0.5}), 1.0) <= 1e-14);
    const double L = specfun::gamma(0.5) * specfun::gamma(1.5) / (specfun::gamma(0.25) * specfun::gamma(1.25));
    CHECK(rel(coeff_ratio_limit({2, 0.25}), L) <= 1e-13);
    for (int m : {2, 3})
        for (double b : {0.25, 0.5, 0.75}) {
            const KernelParams p{m, b};
            const double k = 1e4;
            CHECK(rel(taylor_coeff(p, 10000) / std::pow(k, 2 * b - 2), coeff_ratio_limit(p)) <= 0.05);
        }
}

TEST_CASE("value at the origin and reflection") {
    for (int n : {2, 3})
        for (double a : {0.25, 0.5, 0.75}) {
            GEvaluator ev(KernelParams::for_transport(n, a));
            CHECK(rel(ev.value(0.0), specfun::beta(0.5, (n + 1) / 2.0)) <= 1e-12);
            for (double lam = 0.1; lam < 0.95; lam += 0.1)
                CHECK(rel(ev.value(1.0 / lam), std::pow(lam, n + 2 * a) * ev.value(lam)) <= 1e-8);
        }
    GEvaluator ev({2, 0.25});
    CHECK(rel(ev.value(2.0), std::pow(0.5, 2.5) * ev.value(0.5)) <= 1e-10);
}

TEST_CASE("series and quadrature paths agree") {
    for (int m : {2, 3})
        for (double b : {0.25, 0.5, 0.75}) {
            GEvaluator ev({m, b});
            for (int order = 0; order <= 2; ++order) {
                for (double lam : {0.1, 0.3, 0.5})
                    CHECK(rel(ev.by_series(order, lam), ev.by_quadrature(order, lam)) <= 1e-10);
                for (double lam : {0.7, 0.9})
                    CHECK(rel(ev.by_series(order, lam), ev.by_quadrature(order, lam)) <= 1e-8);
            }
        }
}

TEST_CASE("derivatives") {
    GEvaluator ev({2, 0.5});
    CHECK(ev.first_derivative(0.0) == 0.0);
    CHECK(rel(ev.second_derivative(0.0), 3 * pi / 8) <= 1e-13);
    const double h = 1e-4;
    const double fd = (ev.value(h) - 2 * ev.value(0.0) + ev.value(h)) / (h * h);
    CHECK(rel(fd, 3 * pi / 8) <= 1e-5);
    CHECK(ev.first_derivative(0.4) > 0.0);
    CHECK_THROWS_AS(ev.first_derivative(1.0), DomainError);
}

TEST_CASE("positivity of g and its derivatives on (0,1)") {
    for (int m : {2, 3, 4})
        for (double b : {0.25, 0.5, 0.75}) {
            GEvaluator ev({m, b});
            for (double lam = 0.05; lam < 1.0; lam += 0.1) {
                CHECK(ev.value(lam) > 0.0);
                CHECK(ev.first_derivative(lam) > 0.0);
                CHECK(ev.second_derivative(lam) > 0.0);
            }
        }
}

TEST_CASE("singular point") {
    GEvaluator crit({2, 0.5}), super({2, 0.75}), sub({2, 0.25});
    CHECK_THROWS_AS(crit.value(1.0), SingularityError);
    CHECK_THROWS_AS(super.value(1.0), SingularityError);
    CHECK(rel(sub.value(1.0), g_at_one_closed_form({2, 0.25})) <= 1e-10);
    CHECK(crit.singularity() == SingularityClass::logarithmic);
    CHECK(super.singularity() == SingularityClass::power);
    CHECK(sub.singularity() == SingularityClass::finite);
}

TEST_CASE("recurrence residual") {
    CHECK(check_recurrence(0.0, 2, 0.5) <= 1e-8);
    CHECK(check_recurrence(0.3, 3, 0.25) <= 1e-8);
    CHECK(check_recurrence(0.7, 2, 0.75) <= 1e-6);
    for (int m : {2, 3})
        for (double b : {0.25, 0.5, 0.75})
            for (double lam : {0.0, 0.3, 0.7}) CHECK(check_recurrence(lam, m, b) <= 1e-6);
}

TEST_CASE("singularity scale") {
    const std::vector<double> d{1e-2, 1e-3, 1e-4, 1e-5};
    const auto power = singularity_scale(GEvaluator({2, 0.75}), d);
    CHECK(std::abs(power.exponent + 0.5) <= 0.05);
    CHECK(power.cls == SingularityClass::power);

    const auto log = singularity_scale(GEvaluator({2, 0.5}), d);
    CHECK(log.cls == SingularityClass::logarithmic);
    for (std::size_t i = 1; i < d.size(); ++i) CHECK(log.values[i] > log.values[i - 1]);
    const auto& lr = log.log_ratios;
    CHECK(std::abs(lr[3] - lr[2]) < std::abs(lr[1] - lr[0]));

    const auto fin = singularity_scale(GEvaluator({2, 0.25}), d);
    for (double v : fin.values) CHECK(v < g_at_one_closed_form({2, 0.25}) * (1 + 1e-10));
}
