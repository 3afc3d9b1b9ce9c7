#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "skdv/approximations.hpp"
#include "skdv/errors.hpp"
#include "skdv/stats.hpp"

using namespace skdv;

namespace {

constexpr double pi2 = std::numbers::pi * std::numbers::pi;

std::shared_ptr<const SolitonContext> small_context(double c = 3.0) {
    return std::make_shared<const SolitonContext>(SpatialGrid(25.0, 200, Boundary::Truncated), c, 0.5,
                                                  NormWindow{-25.0, 10.0});
}

NoiseSource scalar_source(std::uint64_t seed, std::uint64_t stream, const SpatialGrid& g) {
    NoiseSpec s;
    s.seed = seed;
    s.stream_id = stream;
    return NoiseSource(s, g);
}

}  // namespace

TEST_SUITE("approximations") {

TEST_CASE("reference constants match the closed forms") {
    const double c = 3.0;
    const ConstantsTable k = ConstantsTable::reference(c);
    CHECK(k.gamma_s_I == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(k.mu_s_I == doctest::Approx(-2.0 / 3.0 / std::sqrt(c)).epsilon(1e-15));
    CHECK(k.gamma_d_I == doctest::Approx(74.0 / 135.0 + 4.0 * pi2 / 405.0).epsilon(1e-15));
    CHECK(k.mu_d_I == doctest::Approx((16.0 * pi2 / 405.0 - 34.0 / 45.0) / std::sqrt(c)).epsilon(1e-15));
    CHECK(k.gamma_w_norm2 == doctest::Approx(4.0 / 35.0 * std::sqrt(c)).epsilon(1e-15));
    // squared Bessel positivity margin δ/(½s²)
    CHECK(k.gamma_d_III / (0.5 * k.gamma_w_norm2) == doctest::Approx(1.6275).epsilon(1e-3));
    CHECK(k.gamma_d_III / (0.5 * k.gamma_w_norm2) > 1.0);
}

TEST_CASE("order-0 rescaling is trivial without noise") {
    const SpatialGrid g(10.0, 64);
    const ConstantsTable k = ConstantsTable::reference(3.0);
    for (Example ex : {Example::Scalar, Example::White}) {
        NoiseSource src = scalar_source(1, 0, g);
        const Alpha0Path p = alpha0_path(ex, 0.0, k, 1e-2, 1.0, src);
        for (double a : p.series["alpha0"]) CHECK(a == 1.0);
    }
}

TEST_CASE("scalar order-0 rescaling is a geometric Brownian motion") {
    const SpatialGrid g(10.0, 64);
    const ConstantsTable k = ConstantsTable::reference(3.0);
    const double sigma = 0.2, t = 1.0;
    RunningStats m;
    for (long p = 0; p < 100000; ++p) {
        NoiseSource src = scalar_source(3, std::uint64_t(p), g);
        m.add(alpha0_path(Example::Scalar, sigma, k, 0.05, t, src, 20).series["alpha0"].back());
    }
    const double expect = std::exp((74.0 / 135.0 + 4.0 * pi2 / 405.0) * sigma * sigma * t);
    CHECK(std::abs(m.mean - expect) < 3.0 * m.se());
}

TEST_CASE("white-noise order-0 rescaling is a squared Bessel process") {
    const SpatialGrid g(10.0, 64);
    const double c = 3.0, sigma = 0.2, t = 1.0;
    const ConstantsTable k = ConstantsTable::reference(c);
    RunningStats m;
    long clamps = 0;
    for (long p = 0; p < 100000; ++p) {
        NoiseSource src = scalar_source(5, std::uint64_t(p), g);
        const Alpha0Path path = alpha0_path(Example::White, sigma, k, 0.01, t, src, 100);
        m.add(path.series["alpha0"].back());
        clamps += path.clamp_count;
    }
    CHECK(clamps == 0);
    CHECK(std::abs(m.mean - (1.0 + 0.093 * std::sqrt(c) * sigma * sigma * t)) < 3.0 * m.se());
}

TEST_CASE("negative-moment mixture reproduces exact positive moments") {
    const double delta = 0.05, s2 = 0.04, x0 = 1.0, t = 2.0;
    // p = −1, −2: E[X] = x0 + δt, E[X²] from the noncentral χ² moments
    const double k = 4.0 * delta / s2, lam = 4.0 * x0 / (s2 * t), sc = s2 * t / 4.0;
    CHECK(bessel_negative_moment(delta, s2, x0, t, -1.0).value == doctest::Approx(x0 + delta * t).epsilon(1e-10));
    const double second = sc * sc * (2.0 * (k + 2.0 * lam) + (k + lam) * (k + lam));
    CHECK(bessel_negative_moment(delta, s2, x0, t, -2.0).value == doctest::Approx(second).epsilon(1e-10));
    CHECK(bessel_negative_moment(delta, s2, x0, 0.0, 3.0).value == 1.0);
}

TEST_CASE("negative moments against a Monte Carlo squared Bessel process") {
    const SpatialGrid g(10.0, 64);
    const double c = 3.0, sigma = 0.2, t = 2.0;
    const ConstantsTable k = ConstantsTable::reference(c);
    const double delta = k.gamma_d_III * sigma * sigma, s2 = k.gamma_w_norm2 * sigma * sigma;
    RunningStats m3, m5;
    for (long p = 0; p < 20000; ++p) {
        NoiseSource src = scalar_source(8, std::uint64_t(p), g);
        const double a = alpha0_path(Example::White, sigma, k, 2e-3, t, src, 1000).series["alpha0"].back();
        m3.add(std::pow(a, -3.0));
        m5.add(std::pow(a, -5.0));
    }
    const NegativeMoment e3 = bessel_negative_moment(delta, s2, 1.0, t, 3.0);
    const NegativeMoment e5 = bessel_negative_moment(delta, s2, 1.0, t, 5.0);
    CHECK(e3.neglected < 1e-12);
    CHECK(std::abs(m3.mean - e3.value) < 3.0 * m3.se());
    CHECK(std::abs(m5.mean - e5.value) < 3.0 * m5.se());
    const NegativeMoment i3 = integrated_negative_moment(delta, s2, 1.0, t, 3.0);
    CHECK(i3.value > t);
    CHECK(i3.value < t * e3.value);
}

TEST_CASE("closed-form statistics") {
    const double c = 3.0;
    const ConstantsTable k = ConstantsTable::reference(c);
    for (Example ex : {Example::Scalar, Example::White}) {
        const TheoryStats z = theoretical_stats(ex, 0.0, k, 2.0);
        CHECK(z.var_c0 == 0.0);
        CHECK(z.mean_c0 == c);
        CHECK(z.var_omega0 == 0.0);
        CHECK(z.mean_omega0 == 0.0);
    }
    const double s = 0.2, t = 2.0, s2t = s * s * t;
    const TheoryStats a = theoretical_stats(Example::Scalar, s, k, t);
    CHECK(a.var_c0 / (c * c) ==
          doctest::Approx(std::exp((64.0 / 135.0 - 16.0 * pi2 / 405.0) * s2t) * std::expm1(16.0 / 9.0 * s2t))
              .epsilon(1e-12));
    CHECK(a.mean_c0 == doctest::Approx(c * std::exp((32.0 / 135.0 - 8.0 * pi2 / 405.0) * s2t)).epsilon(1e-12));
    const double gd = 74.0 / 135.0 + 4.0 * pi2 / 405.0;
    CHECK(a.mean_omega0 ==
          doctest::Approx((16.0 * pi2 / 405.0 - 34.0 / 45.0) / std::sqrt(c) / gd * std::expm1(gd * s2t))
              .epsilon(1e-12));
    CHECK(a.var_omega0 ==
          doctest::Approx(45.0 / (2.0 * c * (78.0 + pi2)) * std::expm1((208.0 / 135.0 + 8.0 * pi2 / 405.0) * s2t))
              .epsilon(1e-12));
    CHECK(a.mean_alpha0 == doctest::Approx(std::exp(gd * s2t)).epsilon(1e-12));

    const TheoryStats w = theoretical_stats(Example::White, s, k, t);
    CHECK(w.var_omega0 == doctest::Approx(0.435 / std::sqrt(c) * s2t + 0.5 * 0.435 * 0.093 * s2t * s2t).epsilon(1e-12));
    CHECK(w.mean_alpha0 == doctest::Approx(1.0 + 0.093 * std::sqrt(c) * s2t).epsilon(1e-12));
    CHECK(w.var_c0 > 16.0 / 35.0 * s * s * std::pow(c, 2.5) * t);
    CHECK(w.mean_c0 > c);
}

TEST_CASE("hierarchy without noise stays at the soliton") {
    const auto ctx = small_context();
    ApproxIntegrator a(ctx, {1e-3, 0.0, Example::Scalar, true});
    NoiseIncrement inc;
    inc.dt = 1e-3;
    for (int j = 0; j < 50; ++j) a.step(inc);
    for (int k = 0; k < 3; ++k) CHECK(a.state().alpha(k) == 1.0);
    CHECK(a.state().omega0 == 0.0);
    CHECK(a.state().omega2 == 0.0);
    for (double v : a.v1()) CHECK(v == 0.0);
    for (double v : a.v2()) CHECK(v == 0.0);
}

TEST_CASE("first step of the higher orders is the order-0 Euler step") {
    const auto ctx = small_context();
    const ConstantsTable k = ConstantsTable::quadrature(*ctx);
    const double sigma = 0.3, dt = 1e-3;
    ApproxIntegrator a(ctx, {dt, sigma, Example::Scalar, false});
    NoiseIncrement inc;
    inc.dt = dt;
    inc.scalar_dW = 0.02;
    a.step(inc);
    const double euler = 1.0 + sigma * sigma * k.gamma_d_I * dt - sigma * k.gamma_s_I * inc.scalar_dW;
    CHECK(a.state().alpha1 == doctest::Approx(euler).epsilon(1e-13));
    CHECK(a.state().alpha2 == doctest::Approx(euler).epsilon(1e-13));
}

TEST_CASE("scalar order-0 amplitude follows the closed form along the path") {
    const auto ctx = small_context();
    const double c = 3.0, sigma = 0.2, dt = 1e-3;
    ApproxIntegrator a(ctx, {dt, sigma, Example::Scalar, false});
    NoiseSource src = scalar_source(2, 0, ctx->grid());
    for (int j = 0; j < 200; ++j) {
        a.step(src.sample(dt));
        const double t = a.state().t, beta = a.state().beta;
        const double closed =
            c * std::exp(-(88.0 / 135.0 + 8.0 * pi2 / 405.0) * sigma * sigma * t + 4.0 / 3.0 * sigma * beta);
        CHECK(a.state().c(0, c) == doctest::Approx(closed).epsilon(1e-6));
        for (int k = 0; k < 3; ++k)
            CHECK(a.state().c(k, c) * a.state().alpha(k) * a.state().alpha(k) == doctest::Approx(c).epsilon(1e-14));
    }
}

TEST_CASE("auxiliary linear stepper is linear in the forcing") {
    const auto ctx = small_context();
    FrameLinearStepper p(*ctx, 1e-3), q(*ctx, 1e-3);
    Vec w1(ctx->size(), 0.0), w2(ctx->size(), 0.0), r(ctx->size());
    for (int j = 0; j < 20; ++j) {
        for (int n = 0; n < ctx->size(); ++n) r[n] = 1e-3 * std::sin(0.3 * ctx->x()[n] + j) * ctx->phi()[n];
        p.advance(w1, 1.1, r);
        for (double& s : r) s *= 2.0;
        q.advance(w2, 1.1, r);
    }
    for (int n = 0; n < ctx->size(); ++n) CHECK(w2[n] == 2.0 * w1[n]);
}

TEST_CASE("first-order perturbation has zero mean") {
    const auto ctx = small_context();
    const double sigma = 0.1, dt = 1e-3;
    const int probes[] = {80, 95, 100, 110};
    RunningStats mean[4];
    for (long p = 0; p < 400; ++p) {
        ApproxIntegrator a(ctx, {dt, sigma, Example::Scalar, false});
        NoiseSource src = scalar_source(13, std::uint64_t(p), ctx->grid());
        for (int j = 0; j < 100; ++j) a.step(src.sample(dt));
        const Vec v1 = a.v1();
        for (int i = 0; i < 4; ++i) mean[i].add(v1[probes[i]]);
    }
    for (int i = 0; i < 4; ++i) CHECK(std::abs(mean[i].mean) < 3.0 * mean[i].se());
}

TEST_CASE("white-noise hierarchy stays orthogonal and positive") {
    const auto ctx = small_context();
    const double sigma = 0.1, dt = 1e-3;
    ApproxIntegrator a(ctx, {dt, sigma, Example::White, true});
    NoiseSpec spec;
    spec.kind = NoiseKind::WhiteSpaceTime;
    spec.seed = 17;
    NoiseSource src(spec, ctx->grid());
    const double pn = std::sqrt(ctx->inner(ctx->phi(), ctx->phi()));
    for (int j = 0; j < 300; ++j) a.step(src.sample(dt));
    const Vec v2 = a.v2();
    const double vn = std::sqrt(ctx->inner(v2, v2));
    CHECK(vn > 0.0);
    CHECK(std::abs(ctx->inner(v2, ctx->phi())) < 2e-2 * vn * pn);
    CHECK(a.state().clamp_count == 0);
    for (int k = 0; k < 3; ++k) CHECK(a.state().alpha(k) > 0.0);
    CHECK_THROWS_AS(a.step(NoiseIncrement{}), DomainError);
}

}
