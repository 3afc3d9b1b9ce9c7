#include "skdv/approximations.hpp"

#include <algorithm>
#include <cmath>

#include "skdv/errors.hpp"

namespace skdv {

namespace {

std::vector<Jet> as_jets(const Vec& v) {
    std::vector<Jet> out(v.size());
    for (std::size_t n = 0; n < v.size(); ++n) out[n] = Jet(0.0, v[n], 0.0);
    return out;
}

Vec first_order(const std::vector<Jet>& j) {
    Vec out(j.size());
    for (std::size_t n = 0; n < j.size(); ++n) out[n] = j[n].c1;
    return out;
}

// K(t) = f(0) + [f]^(1)(σA + σ²B) + [f]^(2)(σA), from jets at A and B.
double combine(double f0, const Jet& at_a, const Jet& at_b, double sigma) {
    return f0 + sigma * at_a.c1 + sigma * sigma * (at_b.c1 + at_a.c2);
}

Vec combine(const Vec& f0, const std::vector<Jet>& at_a, const std::vector<Jet>& at_b, double sigma) {
    Vec out(f0.size());
    for (std::size_t n = 0; n < f0.size(); ++n) out[n] = combine(f0[n], at_a[n], at_b[n], sigma);
    return out;
}

void check_alpha(double a, long step, double t) {
    if (!std::isfinite(a)) throw BlowUp("non-finite approximation", step, t);
    if (a < kFrameCollapseAlpha) throw FrameCollapse("approximate frame scale collapsed", step, t);
}

}  // namespace

double ApproxState::alpha(int k) const {
    switch (k) {
    case 0: return alpha0;
    case 1: return alpha1;
    case 2: return alpha2;
    }
    throw DomainError("approximation order must be 0, 1 or 2");
}

double ApproxState::c(int k, double c_star) const {
    const double a = alpha(k);
    return c_star / (a * a);
}

ApproxIntegrator::ApproxIntegrator(std::shared_ptr<const SolitonContext> ctx, const ApproxConfig& cfg)
    : ctx_(std::move(ctx)), cfg_(cfg), lin_a_(*ctx_, cfg.dt), lin_b_(*ctx_, cfg.dt), lin_c_(*ctx_, cfg.dt),
      lin_d_(*ctx_, cfg.dt), lin_e_(*ctx_, cfg.dt) {
    if (!(cfg.dt > 0.0)) throw DomainError("time step must be positive");
    if (cfg.sigma < 0.0) throw DomainError("noise strength must be non-negative");
    const int m = ctx_->size();
    const Vec zero(m, 0.0);
    f0_ = compute_functionals(*ctx_, zero, cfg.example, true);
    r_sum0_ = drift_field(*ctx_, zero, 1.0, 1.0, cfg.example, f0_, false);
    s_.Va = s_.Vb = s_.Vc = zero;
    if (cfg.with_omega2) s_.Vd = s_.Ve = zero;
}

Vec ApproxIntegrator::v1() const {
    Vec out(s_.Va);
    for (double& x : out) x *= cfg_.sigma;
    return out;
}

Vec ApproxIntegrator::v2() const {
    const double s = cfg_.sigma;
    Vec out(s_.Vb.size());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = s * s_.Vb[n] + s * s * s_.Vc[n];
    return out;
}

void ApproxIntegrator::advance_v2(const TaylorFunctionals& tb, const Vec& vb, double alpha, const NoiseIncrement& inc,
                                  FrameLinearStepper& lin_b, FrameLinearStepper& lin_c, Vec& Vb, Vec& Vc) {
    const SolitonContext& ctx = *ctx_;
    const int m = ctx.size();
    const double dt = cfg_.dt;
    const bool white = cfg_.example == Example::White;
    const double a3 = 1.0 / (alpha * alpha * alpha);
    const double nscale = white ? 1.0 / std::sqrt(alpha) : 1.0;
    const double rscale = white ? 1.0 / alpha : 1.0;

    const Vec s0 = martingale_field(ctx, Vec(m, 0.0), f0_, inc, cfg_.example);
    const Vec s1 = first_order(martingale_field(ctx, as_jets(vb), tb, inc, cfg_.example));
    const Vec nv = nonlinear_term(ctx.grid(), vb);
    const double g2 = tb.gamma_d0.c2, m2 = tb.mu_d0.c2;

    Vec rb(m), rc(m);
    for (int n = 0; n < m; ++n) {
        rb[n] = nscale * s0[n];
        const double r0 = -g2 * ctx.gen_phi()[n] - m2 * ctx.phi_x()[n];
        rc[n] = dt * (a3 * (nv[n] + r0) + rscale * r_sum0_[n]) + nscale * s1[n];
    }
    lin_b.advance(Vb, a3, rb);
    lin_c.advance(Vc, a3, rc);
}

void ApproxIntegrator::step(const NoiseIncrement& inc) {
    const SolitonContext& ctx = *ctx_;
    const SpatialGrid& g = ctx.grid();
    const int m = ctx.size();
    const double dt = cfg_.dt;
    const double sigma = cfg_.sigma;
    const double s2 = sigma * sigma;
    const Example ex = cfg_.example;
    const bool white = ex == Example::White;
    if (white && inc.kind != NoiseKind::WhiteSpaceTime) throw DomainError("Example III expects a white-noise increment");
    if (!white && inc.kind != NoiseKind::Scalar) throw DomainError("Example I expects a scalar increment");

    const double a0 = s_.alpha0, a1 = s_.alpha1, a2 = s_.alpha2;
    const double dB = inc.scalar_dW;
    auto pair = [&](const Vec& w) { return g.inner(inc.field_dW, w); };

    const TaylorFunctionals ta = taylor_functionals(ctx, s_.Va, ex);
    const TaylorFunctionals tb = taylor_functionals(ctx, s_.Vb, ex);
    const TaylorFunctionals tc = taylor_functionals(ctx, s_.Vc, ex);

    // α₁ coefficients use v₁ = σVa; α₂ uses v₂ = σVb + σ²Vc and σVb.
    const double K11 = f0_.gamma_d + sigma * ta.gamma_d.c1;
    const double K02 = s2 * tb.gamma_d0.c2;
    const double K12 = combine(f0_.gamma_d, tb.gamma_d, tc.gamma_d, sigma);

    double d_alpha0, d_alpha1, d_alpha2, d_omega0;
    if (!white) {
        const double K21 = f0_.gamma_s + sigma * ta.gamma_s.c1;
        const double K22 = combine(f0_.gamma_s, tb.gamma_s, tc.gamma_s, sigma);
        k_.K21 = K21;
        k_.K22 = K22;
        d_alpha1 = s2 * K11 * a1 * dt - sigma * K21 * a1 * dB;
        d_alpha2 = (-K02 / (a2 * a2) + s2 * K12 * a2) * dt - sigma * K22 * a2 * dB;
        d_omega0 = f0_.mu_d * s2 * a0 * dt - sigma * a0 * f0_.mu_s * dB;
        d_alpha0 = 0.0;
    } else {
        Vec K21(m);
        for (int n = 0; n < m; ++n) K21[n] = f0_.gamma_w[n] + sigma * ta.gamma_w[n].c1;
        const Vec K22 = combine(f0_.gamma_w, tb.gamma_w, tc.gamma_w, sigma);
        k_.K21 = std::sqrt(g.norm2(K21));
        k_.K22 = std::sqrt(g.norm2(K22));
        d_alpha0 = s2 * f0_.gamma_d * dt - sigma * std::sqrt(a0) * pair(f0_.gamma_w);
        d_alpha1 = s2 * K11 * dt - sigma * std::sqrt(a1) * pair(K21);
        d_alpha2 = (-K02 / (a2 * a2) + s2 * K12) * dt - sigma * std::sqrt(a2) * pair(K22);
        d_omega0 = s2 * f0_.mu_d * dt - sigma * std::sqrt(a0) * pair(f0_.mu_w);
    }
    k_.K11 = K11;
    k_.K02 = K02;
    k_.K12 = K12;

    if (cfg_.with_omega2) {
        const TaylorFunctionals td = taylor_functionals(ctx, s_.Vd, ex);
        const TaylorFunctionals te = taylor_functionals(ctx, s_.Ve, ex);
        const double M02 = s2 * td.mu_d0.c2;
        const double M12 = combine(f0_.mu_d, td.mu_d, te.mu_d, sigma);
        double d_omega2;
        if (!white) {
            const double M22 = combine(f0_.mu_s, td.mu_s, te.mu_s, sigma);
            k_.M22 = M22;
            d_omega2 = (-M02 / (a2 * a2) + s2 * M12 * a2) * dt - sigma * a2 * M22 * dB;
        } else {
            const Vec M22 = combine(f0_.mu_w, td.mu_w, te.mu_w, sigma);
            k_.M22 = std::sqrt(g.norm2(M22));
            d_omega2 = (-M02 / (a2 * a2) + s2 * M12) * dt - sigma * std::sqrt(a2) * pair(M22);
        }
        k_.M02 = M02;
        k_.M12 = M12;
        const Vec vd = s_.Vd;
        advance_v2(td, vd, a2, inc, lin_d_, lin_e_, s_.Vd, s_.Ve);
        s_.omega2 += d_omega2;
    }

    // V^(1)(α₀)
    {
        const Vec s0 = martingale_field(ctx, Vec(m, 0.0), f0_, inc, ex);
        Vec r(m);
        const double ns = white ? 1.0 / std::sqrt(a0) : 1.0;
        for (int n = 0; n < m; ++n) r[n] = ns * s0[n];
        lin_a_.advance(s_.Va, 1.0 / (a0 * a0 * a0), r);
    }
    const Vec vb = s_.Vb;
    advance_v2(tb, vb, a1, inc, lin_b_, lin_c_, s_.Vb, s_.Vc);

    ++s_.step_index;
    s_.t = s_.step_index * dt;
    if (!white) {
        s_.beta += dB;
        const double gs = f0_.gamma_s;
        s_.alpha0 = std::exp((f0_.gamma_d - 0.5 * gs * gs) * s2 * s_.t - gs * sigma * s_.beta);
    } else {
        s_.alpha0 = a0 + d_alpha0;
        if (s_.alpha0 <= 0.0) {
            s_.alpha0 = std::abs(s_.alpha0);
            ++s_.clamp_count;
        }
    }
    s_.alpha1 = a1 + d_alpha1;
    s_.alpha2 = a2 + d_alpha2;
    s_.omega0 += d_omega0;
    check_alpha(s_.alpha1, s_.step_index, s_.t);
    check_alpha(s_.alpha2, s_.step_index, s_.t);
}

Alpha0Path alpha0_path(Example ex, double sigma, const ConstantsTable& k, double dt, double t_end, NoiseSource& noise,
                       int stride) {
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
    if (stride < 1) throw DomainError("record stride must be >= 1");
    if (noise.spec().kind != NoiseKind::Scalar) throw DomainError("alpha0_path needs a scalar noise source");
    Alpha0Path out;
    const long steps = std::lround(t_end / dt);
    const double s2 = sigma * sigma;
    const double gw = std::sqrt(k.gamma_w_norm2);
    double alpha = 1.0, beta = 0.0;
    out.series.t.push_back(0.0);
    out.series.push("alpha0", alpha);
    for (long j = 0; j < steps; ++j) {
        const double dB = noise.sample(dt).scalar_dW;
        const double t = (j + 1) * dt;
        if (ex == Example::Scalar) {
            beta += dB;
            alpha = std::exp((k.gamma_d_I - 0.5 * k.gamma_s_I * k.gamma_s_I) * s2 * t - k.gamma_s_I * sigma * beta);
        } else {
            alpha += k.gamma_d_III * s2 * dt + gw * sigma * std::sqrt(alpha) * dB;
            if (alpha <= 0.0) {
                alpha = std::abs(alpha);
                ++out.clamp_count;
            }
        }
        if ((j + 1) % stride == 0) {
            out.series.t.push_back(t);
            out.series.push("alpha0", alpha);
        }
    }
    return out;
}

NegativeMoment bessel_negative_moment(double delta, double s2, double x0, double t, double p) {
    if (!(t > 0.0) || !(s2 > 0.0)) {
        if (!(x0 > 0.0)) throw DomainError("negative moment of a zero start");
        return {std::pow(x0, -p), 0.0};
    }
    // (4/(s²t))X ~ χ²_k(λ), k = 4δ/s², λ = 4x₀/(s²t); mixture over J ~ Poisson(λ/2)
    const double k = 4.0 * delta / s2;
    const double half_lambda = 2.0 * x0 / (s2 * t);
    const double scale = std::pow(s2 * t / 4.0, -p);
    // E[(χ²_ν)^{−p}] = 2^{−p}Γ(ν/2 − p)/Γ(ν/2) for ν/2 > p
    const double spread = 40.0 * std::sqrt(half_lambda + 1.0) + 50.0;
    const long jmin = long(std::max(0.0, half_lambda - spread));
    const long jmax = long(half_lambda + spread);
    NegativeMoment out;
    double total_w = 0.0;
    for (long j = jmin; j <= jmax; ++j) {
        const double logw = -half_lambda + j * std::log(half_lambda) - std::lgamma(j + 1.0);
        const double w = std::exp(logw);
        total_w += w;
        const double nu2 = 0.5 * k + j;
        if (nu2 <= p) {
            out.neglected += w;
            continue;
        }
        out.value += std::exp(logw - p * std::log(2.0) + std::lgamma(nu2 - p) - std::lgamma(nu2));
    }
    out.neglected += std::max(0.0, 1.0 - total_w);
    out.value *= scale;
    return out;
}

NegativeMoment integrated_negative_moment(double delta, double s2, double x0, double t, double p, int panels) {
    if (t <= 0.0) return {};
    if (panels < 2) panels = 2;
    if (panels % 2) ++panels;
    const double h = t / panels;
    NegativeMoment out;
    for (int i = 0; i <= panels; ++i) {
        const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const NegativeMoment nm = bessel_negative_moment(delta, s2, x0, i * h, p);
        out.value += w * nm.value;
        out.neglected = std::max(out.neglected, nm.neglected);
    }
    out.value *= h / 3.0;
    return out;
}

TheoryStats theoretical_stats(Example ex, double sigma, const ConstantsTable& k, double t) {
    const double c = k.c_star;
    const double s2 = sigma * sigma;
    TheoryStats out;
    if (ex == Example::Scalar) {
        const double gd = k.gamma_d_I, gs = k.gamma_s_I;
        const double lg = gd - 0.5 * gs * gs;  // log-drift of α₀
        out.mean_alpha0 = std::exp(gd * s2 * t);
        // c₀ = c*exp(−2lgσ²t + 2gsσβ)
        out.mean_c0 = c * std::exp((-2.0 * lg + 2.0 * gs * gs) * s2 * t);
        out.var_c0 = out.mean_c0 * out.mean_c0 * std::expm1(4.0 * gs * gs * s2 * t);
        out.mean_omega0 = s2 * gd > 0.0 ? k.mu_d_I / gd * std::expm1(gd * s2 * t) : k.mu_d_I * s2 * t;
        // σ²μ_s²∫E[α₀²], E[α₀²] = exp((2gd + gs²)σ²s)
        const double r = (2.0 * gd + gs * gs) * s2;
        out.var_omega0 = k.mu_s_I * k.mu_s_I * s2 * (r > 0.0 ? std::expm1(r * t) / r : t);
        return out;
    }
    const double gd = k.gamma_d_III, gw2 = k.gamma_w_norm2;
    out.mean_alpha0 = 1.0 + gd * s2 * t;
    out.mean_omega0 = s2 * k.mu_d_III * t;
    out.var_omega0 = k.mu_w_norm2 * s2 * (t + 0.5 * gd * s2 * t * t);
    if (sigma == 0.0) {
        out.mean_c0 = c;
        return out;
    }
    const NegativeMoment m3 = integrated_negative_moment(gd * s2, gw2 * s2, 1.0, t, 3.0);
    const NegativeMoment m5 = integrated_negative_moment(gd * s2, gw2 * s2, 1.0, t, 5.0);
    out.mean_c0 = c + c * s2 * (-2.0 * gd + 3.0 * gw2) * m3.value;
    out.var_c0 = 4.0 * s2 * c * c * gw2 * m5.value;
    out.neglected = std::max(m3.neglected, m5.neglected);
    return out;
}

}  // namespace skdv
