#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "skdv/direct.hpp"
#include "skdv/errors.hpp"
#include "skdv/soliton.hpp"

using namespace skdv;

namespace {

Vec translate(const SpatialGrid& g, double c, double shift) {
    Vec u(g.size());
    for (int n = 0; n < g.size(); ++n) u[n] = soliton_profile(c, g.x(n) - shift);
    return u;
}

NoiseIncrement quiet_scalar(double dt) {
    NoiseIncrement inc;
    inc.dt = dt;
    return inc;
}

// Deterministic run of the soliton φ₁ to t = 1.
double advection_error(int N, double dt) {
    auto g = std::make_shared<const SpatialGrid>(30.0, N);
    const DirectScheme scheme(g, dt, 0.0);
    DirectState s = make_direct_state(translate(*g, 1.0, 0.0));
    const long steps = std::lround(1.0 / dt);
    for (long j = 0; j < steps; ++j) scheme.advance(s, quiet_scalar(dt));
    return oracle::sup_diff(s.u, translate(*g, 1.0, 1.0));
}

}  // namespace

TEST_SUITE("spde-direct") {

TEST_CASE("zero data stays zero") {
    auto g = std::make_shared<const SpatialGrid>(10.0, 128);
    const DirectScheme scheme(g, 1e-3, 0.0);
    DirectState s = make_direct_state(Vec(g->size(), 0.0));
    for (int j = 0; j < 5; ++j) scheme.advance(s, quiet_scalar(1e-3));
    for (double u : s.u) CHECK(u == 0.0);
    CHECK(s.step_index == 5);
}

TEST_CASE("a vanishing increment reduces the first step to explicit Euler") {
    auto g = std::make_shared<const SpatialGrid>(20.0, 400);
    const Vec u0 = translate(*g, 3.0, 0.0);
    DirectState a = make_direct_state(u0), b = make_direct_state(u0);
    DirectScheme(g, 1e-4, 0.4).init_step(a, quiet_scalar(1e-4));
    DirectScheme(g, 1e-4, 0.0).init_step(b, quiet_scalar(1e-4));
    CHECK(a.u == b.u);

    Vec d1, d3;
    g->d1(u0, d1);
    g->d3(u0, d3);
    for (int n = 0; n < g->size(); ++n)
        CHECK(a.u[n] == doctest::Approx(u0[n] - 1e-4 * (d3[n] + 2.0 * u0[n] * d1[n])).epsilon(1e-14));
}

TEST_CASE("scalar noise enters the first step multiplicatively") {
    auto g = std::make_shared<const SpatialGrid>(20.0, 400);
    const Vec u0 = translate(*g, 3.0, 0.0);
    NoiseIncrement inc = quiet_scalar(1e-4);
    inc.scalar_dW = 0.01;
    DirectState a = make_direct_state(u0), b = make_direct_state(u0);
    DirectScheme(g, 1e-4, 0.5).init_step(a, inc);
    DirectScheme(g, 1e-4, 0.0).init_step(b, quiet_scalar(1e-4));
    for (int n = 0; n < g->size(); ++n) CHECK(a.u[n] - b.u[n] == doctest::Approx(0.005 * u0[n]).epsilon(1e-9));
}

TEST_CASE("Euler start is second order in time against the exact translate") {
    auto g = std::make_shared<const SpatialGrid>(30.0, 12000);
    const Vec u0 = translate(*g, 1.0, 0.0);
    std::vector<double> dts, errs;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
        DirectState s = make_direct_state(u0);
        DirectScheme(g, dt, 0.0).init_step(s, quiet_scalar(dt));
        dts.push_back(dt);
        errs.push_back(oracle::sup_diff(s.u, translate(*g, 1.0, dt)));
    }
    CHECK(oracle::log_slope(dts, errs) > 1.8);
}

TEST_CASE("soliton advection at desk resolution") {
    CHECK(advection_error(1024, 1e-4) < 5e-3);
}

TEST_CASE("soliton advection converges at second order") {
    const double e1 = advection_error(512, 2e-4);
    const double e2 = advection_error(1024, 1e-4);
    const double e3 = advection_error(2048, 5e-5);
    CHECK(oracle::log_slope({4.0, 2.0, 1.0}, {e1, e2, e3}) >= 1.8);
}

TEST_CASE("deterministic energy is conserved to discretization accuracy") {
    auto g = std::make_shared<const SpatialGrid>(30.0, 1024);
    SchemeConfig cfg;
    cfg.dt = 1e-4;
    cfg.t_end = 1.0;
    const SeriesRecord rec = run_path(cfg, g, translate(*g, 1.0, 0.0), {energy_observer(*g)}, 1000);
    const double e0 = rec["energy"].front();
    for (double e : rec["energy"]) CHECK(std::abs(e / e0 - 1.0) < 1e-4);
    CHECK(e0 == doctest::Approx(6.0).epsilon(1e-6));
}

TEST_CASE("run_path records the initial snapshot and is deterministic") {
    auto g = std::make_shared<const SpatialGrid>(20.0, 256);
    SchemeConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.0;
    cfg.sigma = 0.3;
    cfg.noise.seed = 12;
    const Vec u0 = translate(*g, 3.0, 0.0);
    const SeriesRecord empty = run_path(cfg, g, u0, {energy_observer(*g)});
    CHECK(empty.t.size() == 1);
    CHECK(empty["energy"].front() == g->norm2(u0));

    cfg.t_end = 0.2;
    const SeriesRecord a = run_path(cfg, g, u0, {energy_observer(*g)}, 10);
    const SeriesRecord b = run_path(cfg, g, u0, {energy_observer(*g)}, 10);
    CHECK(a.t.size() == 21);
    CHECK(a["energy"] == b["energy"]);
    cfg.noise.stream_id = 1;
    const SeriesRecord c = run_path(cfg, g, u0, {energy_observer(*g)}, 10);
    CHECK(a["energy"].back() != c["energy"].back());
}

TEST_CASE("non-finite data raises a blow-up carrying the step") {
    auto g = std::make_shared<const SpatialGrid>(10.0, 64);
    const DirectScheme scheme(g, 1e-3, 0.0);
    Vec u(g->size(), 0.0);
    u[7] = std::numeric_limits<double>::infinity();
    DirectState s = make_direct_state(u);
    try {
        scheme.advance(s, quiet_scalar(1e-3));
        FAIL("expected BlowUp");
    } catch (const BlowUp& e) {
        CHECK(e.step == 1);
    }
    DirectState fresh = make_direct_state(Vec(g->size(), 0.0));
    CHECK_THROWS_AS(scheme.step(fresh, quiet_scalar(1e-3)), DomainError);
}

TEST_CASE("truncated stencils keep the scheme well posed") {
    auto g = std::make_shared<const SpatialGrid>(30.0, 1024, Boundary::Truncated);
    const DirectScheme scheme(g, 1e-4, 0.0);
    DirectState s = make_direct_state(translate(*g, 1.0, 0.0));
    for (int j = 0; j < 10000; ++j) scheme.advance(s, quiet_scalar(1e-4));
    CHECK(oracle::sup_diff(s.u, translate(*g, 1.0, 1.0)) < 5e-3);
}

}
