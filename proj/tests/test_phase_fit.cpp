#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "skdv/errors.hpp"
#include "skdv/phase_fit.hpp"
#include "skdv/soliton.hpp"

using namespace skdv;

namespace {

Vec profile(const SpatialGrid& g, double c, double shift) {
    Vec u(g.size());
    for (int n = 0; n < g.size(); ++n) u[n] = soliton_profile(c, g.x(n) - shift);
    return u;
}

}  // namespace

TEST_SUITE("phase-fit") {

TEST_CASE("exact soliton is an exact root") {
    const SpatialGrid g(30.0, 2048);
    for (auto [c, xi] : {std::pair{3.0, 1.234}, std::pair{1.0, -2.5}}) {
        const PhaseFit f = fit_phase(g, profile(g, c, xi), c * 1.1, xi - 0.2);
        CHECK(std::abs(f.c_fit - c) < 1e-8);
        CHECK(std::abs(f.xi_fit - xi) < 1e-8);
        CHECK(std::max(std::abs(f.residual[0]), std::abs(f.residual[1])) <= 1e-10 * std::sqrt(g.norm2(profile(g, c, xi))));
    }
}

TEST_CASE("translation generator moves the fitted position") {
    const SpatialGrid g(30.0, 2048);
    const double c = 3.0;
    std::vector<double> eps, err;
    for (double e : {2e-2, 1e-2, 5e-3}) {
        Vec u = profile(g, c, 0.0);
        for (int n = 0; n < g.size(); ++n) u[n] += e * soliton_dx(c, g.x(n));
        const PhaseFit f = fit_phase(g, u, c, 0.0);
        eps.push_back(e);
        err.push_back(std::abs(f.xi_fit + e));
    }
    CHECK(oracle::log_slope(eps, err) > 1.8);
    CHECK(err.back() < 1e-4);
}

TEST_CASE("scaling family membership fixes the amplitude") {
    const SpatialGrid g(30.0, 2048);
    const double c = 3.0;
    for (double e : {0.05, -0.03}) {
        Vec u(g.size());
        const double s = 1.0 + e;
        for (int n = 0; n < g.size(); ++n) u[n] = s * s * soliton_profile(c, s * g.x(n));
        const PhaseFit f = fit_phase(g, u, c, 0.0);
        CHECK(std::abs(f.c_fit - c * s * s) < 1e-8);
        CHECK(std::abs(f.xi_fit) < 1e-8);
    }
}

TEST_CASE("idempotence and translation equivariance") {
    const SpatialGrid g(30.0, 1024);
    const double c = 3.0;
    Vec u = profile(g, c, 0.3);
    for (int n = 0; n < g.size(); ++n) u[n] += 0.05 * std::exp(-0.5 * (g.x(n) + 4.0) * (g.x(n) + 4.0));
    const PhaseFit a = fit_phase(g, u, c, 0.3);
    const PhaseFit b = fit_phase(g, profile(g, a.c_fit, a.xi_fit), c, 0.3);
    CHECK(std::abs(a.c_fit - b.c_fit) < 1e-8);
    CHECK(std::abs(a.xi_fit - b.xi_fit) < 1e-8);

    const int k = 17;
    Vec shifted(g.size());
    for (int n = 0; n < g.size(); ++n) shifted[n] = u[g.wrap(n - k)];
    const PhaseFit s = fit_phase(g, shifted, a.c_fit, a.xi_fit);
    CHECK(std::abs(s.c_fit - a.c_fit) < 1e-8);
    CHECK(std::abs(s.xi_fit - (a.xi_fit + k * g.dx())) < 1e-8);
}

TEST_CASE("analytic Jacobian against finite differences") {
    const SpatialGrid g(30.0, 4096);
    Vec u = profile(g, 2.7, 0.4);
    for (int n = 0; n < g.size(); ++n) u[n] += 0.1 * std::exp(-0.5 * (g.x(n) - 1.0) * (g.x(n) - 1.0));
    const double c = 3.0, xi = 0.1, h = 1e-5;
    const FitResidual r = fit_residual(g, u, c, xi);
    const FitResidual cp = fit_residual(g, u, c + h, xi), cm = fit_residual(g, u, c - h, xi);
    const FitResidual xp = fit_residual(g, u, c, xi + h), xm = fit_residual(g, u, c, xi - h);
    const double scale = std::max({std::abs(r.jac[0]), std::abs(r.jac[1]), std::abs(r.jac[2]), std::abs(r.jac[3])});
    for (int i = 0; i < 2; ++i) {
        CHECK(std::abs(r.jac[2 * i] - (cp.f[i] - cm.f[i]) / (2 * h)) < 1e-6 * scale);
        // the ξ column differentiates with D₁, second order in dx
        CHECK(std::abs(r.jac[2 * i + 1] - (xp.f[i] - xm.f[i]) / (2 * h)) < 1e-4 * scale);
    }
}

TEST_CASE("initial guess and failure modes") {
    const SpatialGrid g(30.0, 600);
    const Vec u = profile(g, 3.0, 2.0);
    const auto guess = initial_guess(g, u, 3.0);
    CHECK(guess[0] == 3.0);
    CHECK(std::abs(guess[1] - 2.0) <= 0.5 * g.dx());
    CHECK_THROWS_AS(fit_phase(g, u, 0.0, 0.0), DomainError);
    FitOptions opt;
    opt.max_iter = 1;
    CHECK_THROWS_AS(fit_phase(g, u, 1.0, 0.0, opt), NoConvergence);
}

TEST_CASE("phase shift integrates the velocity") {
    const int n = 101;
    const double dt = 0.01;
    Vec xi(n), c(n, 3.0), zero(n, 0.0), one(n, 1.0);
    for (int j = 0; j < n; ++j) xi[j] = 3.0 * j * dt;
    for (double w : phase_shift(xi, c, dt)) CHECK(std::abs(w) < 1e-13);
    const Vec om = phase_shift(zero, one, dt);
    for (int j = 0; j < n; ++j) CHECK(om[j] == doctest::Approx(-j * dt).epsilon(1e-12));
    CHECK_THROWS_AS(phase_shift(xi, Vec(3, 1.0), dt), DomainError);
}

TEST_CASE("warm-started fits along a noisy direct path converge quickly") {
    auto g = std::make_shared<const SpatialGrid>(50.0, 2048);
    SchemeConfig cfg;
    cfg.dt = 2.5e-5;
    cfg.t_end = 0.5;
    cfg.sigma = 0.25;
    cfg.noise.seed = 1;
    const SeriesRecord rec = run_path(cfg, g, profile(*g, 3.0, 0.0), {fit_observer(*g, 3.0)}, 40);
    const auto& it = rec["iterations"];
    long quick = 0;
    for (double i : it) quick += i <= 6.0;
    CHECK(double(quick) >= 0.99 * double(it.size()));
    for (double c : rec["c_fit"]) CHECK(c > 0.0);
    CHECK(rec["Omega_fit"].front() == doctest::Approx(0.0));
}

}
