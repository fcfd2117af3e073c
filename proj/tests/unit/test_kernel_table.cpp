#include <doctest.h>

#include <cmath>

#include "nlt/kernel_table.hpp"
#include "nlt/quadrature.hpp"

using namespace nlt;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
}

TEST_CASE("table matches the direct evaluator") {
    for (int m : {2, 3})
        for (double b : {0.25, 0.5, 0.75}) {
            const auto t = KernelTable::shared({m, b});
            const auto& ev = t->evaluator();
            for (int order = 0; order <= 2; ++order) {
                for (double lam : {0.2, 0.55, 0.8, 0.97, 0.999})
                    CHECK(rel(t->eval(order, lam), ev.by_quadrature(order, lam)) <= 1e-9);
                for (double d : {1e-3, 1e-7, 1e-12})
                    CHECK(rel(t->below(order, d), ev.near_one(order, d, false)) <= 1e-9);
            }
            for (double lam : {1.2, 1.9, 3.0}) CHECK(rel(t->g(lam), ev.value(lam)) <= 1e-9);
        }
}

TEST_CASE("shared tables are cached") {
    CHECK(KernelTable::shared({2, 0.5}).get() == KernelTable::shared({2, 0.5}).get());
    CHECK(KernelTable::shared({2, 0.5}).get() != KernelTable::shared({3, 0.5}).get());
}

TEST_CASE("moment H against quadrature") {
    for (double b : {0.25, 0.5, 0.75}) {
        const auto t = KernelTable::shared({2, b});
        for (double lam : {0.3, 0.8}) {
            const double q = quad::integrate([&](double s) { return s * s * t->g(s); }, 0.0, lam, quad::Tolerance{0.0, 1e-12}).value;
            CHECK(rel(t->moment(lam), q) <= 1e-9);
        }
        CHECK(std::isfinite(t->moment_at_one()));
        CHECK(t->moment_below(1e-9) < t->moment_at_one());
        CHECK(t->moment_above(1e-9) > t->moment_at_one());
        CHECK(rel(t->moment_below(1e-12), t->moment_at_one()) <= 1e-5);
        // H is increasing
        double prev = 0.0;
        for (double lam = 0.1; lam < 4.0; lam += 0.13) {
            const double h = t->moment(lam);
            CHECK(h > prev);
            prev = h;
        }
    }
}
