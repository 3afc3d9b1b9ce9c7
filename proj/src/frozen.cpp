#include <cmath>
#include <numeric>

#include "skdv/errors.hpp"
#include "skdv/frozen.hpp"

namespace skdv {

void FrameLinearStepper::advance(Vec& w, double a, const Vec& rhs) {
    const CyclicBandOperator& L0 = ctx_->L0();
    if (!solver_ || a != cached_a_) {
        solver_.emplace(L0.shifted_identity(-0.5 * dt_ * a));
        cached_a_ = a;
    }
    L0.apply(w, lw_);
    const double s = 0.5 * dt_ * a;
    for (std::size_t n = 0; n < w.size(); ++n) w[n] += s * lw_[n] + rhs[n];
    solver_->solve(w);
}

ModulationState make_modulation_state(const SolitonContext& ctx) {
    ModulationState s;
    s.v.assign(ctx.size(), 0.0);
    s.v_prev = s.v;
    return s;
}

double velocity(const ModulationState& s, double c_star) { return c_star / (s.alpha * s.alpha); }

FrozenScheme::FrozenScheme(std::shared_ptr<const SolitonContext> ctx, const FrozenConfig& cfg)
    : ctx_(std::move(ctx)), cfg_(cfg), linear_(*ctx_, cfg.dt) {
    if (!(cfg.dt > 0.0)) throw DomainError("time step must be positive");
    if (cfg.sigma < 0.0) throw DomainError("noise strength must be non-negative");
}

void FrozenScheme::step(ModulationState& s, const NoiseIncrement& inc) {
    const SolitonContext& ctx = *ctx_;
    const SpatialGrid& g = ctx.grid();
    const double dt = cfg_.dt;
    const double sigma = cfg_.sigma;
    const Example ex = cfg_.example;
    const double alpha = s.alpha;
    const double a3 = 1.0 / (alpha * alpha * alpha);
    const int m = g.size();

    last_ = compute_functionals(ctx, s.v, ex, true);
    const ModulationFunctionals& f = last_;

    Vec rhs = drift_field(ctx, s.v, alpha, sigma, ex, f, false);
    for (double& r : rhs) r *= dt;

    const Vec nv = nonlinear_term(g, s.v);
    if (s.step_index == 0) {
        for (int n = 0; n < m; ++n) rhs[n] += dt * a3 * nv[n];
    } else {
        const Vec np = nonlinear_term(g, s.v_prev);
        const double ap = 1.0 / (s.alpha_prev * s.alpha_prev * s.alpha_prev);
        for (int n = 0; n < m; ++n) rhs[n] += dt * (1.5 * a3 * nv[n] - 0.5 * ap * np[n]);
    }

    double dgam = 0.0, dmu = 0.0;
    if (sigma > 0.0) {
        const Vec mf = martingale_field(ctx, s.v, f, inc, ex);
        const double scale = ex == Example::Scalar ? sigma : sigma / std::sqrt(alpha);
        for (int n = 0; n < m; ++n) rhs[n] += scale * mf[n];
        if (ex == Example::Scalar) {
            dgam = -sigma * alpha * f.gamma_s * inc.scalar_dW;
            dmu = -sigma * alpha * f.mu_s * inc.scalar_dW;
        } else {
            const double sa = sigma * std::sqrt(alpha);
            dgam = -sa * g.inner(inc.field_dW, f.gamma_w);
            dmu = -sa * g.inner(inc.field_dW, f.mu_w);
        }
    }

    const double a2 = 1.0 / (alpha * alpha);
    const double s2 = sigma * sigma * (ex == Example::Scalar ? alpha : 1.0);
    const double alpha_new = alpha + (-a2 * f.gamma_d0 + s2 * f.gamma_d) * dt + dgam;
    const double xi_new = s.xi + (ctx.c_star() * a2 - a2 * f.mu_d0 + s2 * f.mu_d) * dt + dmu;

    Vec w = s.v;
    linear_.advance(w, a3, rhs);

    s.v_prev = std::move(s.v);
    s.v = std::move(w);
    s.alpha_prev = alpha;
    s.alpha = alpha_new;
    s.xi = xi_new;
    ++s.step_index;
    s.t += dt;

    const double chk = std::accumulate(s.v.begin(), s.v.end(), 0.0);
    if (!std::isfinite(chk) || !std::isfinite(alpha_new) || !std::isfinite(xi_new))
        throw BlowUp("non-finite state in frozen frame", s.step_index, s.t);
    if (alpha_new < kFrameCollapseAlpha) throw FrameCollapse("frame scale collapsed", s.step_index, s.t);
}

}  // namespace skdv
