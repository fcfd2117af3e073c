#include <doctest.h>

#include <cmath>
#include <limits>

#include "nlt/errors.hpp"
#include "nlt/sim.hpp"

using namespace nlt;

namespace {
SimConfig small_config(double r_max, int cells, double t_end) {
    SimConfig c;
    c.grid.r_max = r_max;
    c.grid.n_cells = cells;
    c.t_end = t_end;
    c.threads = 2;
    return c;
}

DiagnosticsRow row(double t, double grad, double dt) {
    DiagnosticsRow r;
    r.t = t;
    r.max_abs_gradient = grad;
    r.dt = dt;
    return r;
}
}  // namespace

TEST_CASE("config validation") {
    auto c = small_config(1.0, 16, 1.0);
    CHECK_NOTHROW(c.validate());
    c.cfl = 1.5;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c.cfl = 0.5;
    c.dt_floor = 0.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    CHECK(scheme_from_string("semilagrangian") == Scheme::semilagrangian_monotone);
    CHECK_THROWS_AS(scheme_from_string("weno"), DomainError);
}

TEST_CASE("constant data does not move") {
    const auto res = run(small_config(4.0, 64, 0.5), constant_profile(1.0), NonlocalParams{2, 0.5});
    CHECK(res.verdict == Verdict::completed);
    for (const auto& r : res.history) {
        CHECK(r.J == 0.0);
        CHECK(r.sup_norm == 1.0);
    }
    Simulator sim(small_config(4.0, 64, 0.5), NonlocalParams{2, 0.5});
    auto s = sim.initial_state(constant_profile(1.0));
    for (double u : s.u) CHECK(u == 0.0);
}

TEST_CASE("grid velocity matches the quadrature velocity") {
    const auto f = gaussian_profile(1.0);
    const NonlocalParams p{2, 0.5};
    Simulator sim(small_config(8.0, 1024, 1.0), p);
    const auto s = sim.initial_state(f);
    CHECK(s.u[0] == 0.0);
    const auto r = sim.nodes();
    for (std::size_t i : {64u, 128u, 256u}) CHECK(std::abs(s.u[i] - radial_velocity(f, p, r[i])) <= 1e-5);
}

TEST_CASE("one step preserves the range and the maximum principle holds") {
    for (auto scheme : {Scheme::upwind1, Scheme::semilagrangian_monotone})
        for (int n : {2, 3}) {
            auto c = small_config(8.0, 256, 0.3);
            c.scheme = scheme;
            const auto res = run(c, gaussian_profile(1.0), NonlocalParams{n, 0.25});
            CHECK(res.verdict == Verdict::completed);
            CHECK(res.range_violation <= 1e-12);
            for (const auto& r : res.history) CHECK(std::abs(r.sup_norm - 1.0) <= 1e-12);
        }
}

TEST_CASE("velocity at the first node shrinks under refinement") {
    const auto f = gaussian_profile(1.0);
    double prev = std::numeric_limits<double>::infinity();
    for (int cells : {128, 256, 512}) {
        Simulator sim(small_config(8.0, cells, 1.0), NonlocalParams{2, 0.75});
        const double u1 = std::abs(sim.initial_state(f).u[1]);
        CHECK(u1 < prev);
        prev = u1;
    }
}

TEST_CASE("grid functional J matches the continuum functional") {
    const auto f = gaussian_profile(1.0);
    GridSpec g{8.0, 4096};
    const auto r = g.nodes();
    std::vector<double> th(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) th[i] = f.value(r[i]);
    const double J = grid_functional_J(r, th, f.value(8.0), 2);
    CHECK(std::abs(J - functional_J(f, 2).value) <= 2e-3 * J);
}

TEST_CASE("J increases for a focusing profile") {
    const auto f = gaussian_profile(1.0);
    const auto res = run(small_config(8.0, 256, 0.2), f, NonlocalParams{2, 0.5});
    REQUIRE(res.history.size() >= 2);
    CHECK(res.history[1].J > res.history[0].J);
}

TEST_CASE("history cadence keeps the first and last steps") {
    auto c = small_config(8.0, 128, 0.5);
    c.output_every = 1000;
    const auto res = run(c, gaussian_profile(1.0), NonlocalParams{2, 0.5});
    REQUIRE(res.history.size() == 3);
    CHECK(res.history[0].t == 0.0);
    CHECK(res.history[2].t == c.t_end);
    CHECK(res.steps > 2);
}

TEST_CASE("step limit aborts") {
    auto c = small_config(8.0, 128, 10.0);
    c.max_steps = 3;
    const auto res = run(c, gaussian_profile(1.0), NonlocalParams{2, 0.5});
    CHECK(res.verdict == Verdict::aborted);
    CHECK_FALSE(res.message.empty());
}

TEST_CASE("blow-up detection rules") {
    const auto c = small_config(1.0, 16, 1.0);
    std::vector<DiagnosticsRow> flat{row(0, 1, 0), row(0.1, 1, 0.1), row(0.2, 1.1, 0.1)};
    CHECK_FALSE(detect_blowup(flat, c).has_value());
    std::vector<DiagnosticsRow> collapse{row(0, 1, 0), row(0.1, 1, 0.1), row(0.7, 1, 1e-10)};
    CHECK(*detect_blowup(collapse, c) == 0.7);
    std::vector<DiagnosticsRow> steep{row(0, 1, 0), row(0.1, 3, 0.1), row(0.4, 10, 0.1), row(0.5, 20, 0.1)};
    CHECK(*detect_blowup(steep, c) == 0.4);
}
