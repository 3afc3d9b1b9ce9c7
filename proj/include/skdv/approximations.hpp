#pragma once

#include <memory>

#include "skdv/constants.hpp"
#include "skdv/frozen.hpp"
#include "skdv/series.hpp"

namespace skdv {

struct ApproxConfig {
    double dt = 1e-3;
    double sigma = 0.0;
    Example example = Example::Scalar;
    bool with_omega2 = false;
};

// State of the order-0/1/2 hierarchy along one path.
//   Va = V^(1)(α₀), Vb = V^(1)(α₁), Vc = V^(2)(α₁),
//   Vd = V^(1)(α₂), Ve = V^(2)(α₂) (only with Ω₂).
struct ApproxState {
    double t = 0.0;
    long step_index = 0;
    double beta = 0.0;  // scalar Brownian path (Example I)
    double alpha0 = 1.0, alpha1 = 1.0, alpha2 = 1.0;
    double omega0 = 0.0, omega2 = 0.0;
    Vec Va, Vb, Vc, Vd, Ve;
    long clamp_count = 0;  // Example III α₀ sign flips

    double c(int k, double c_star) const;
    double alpha(int k) const;
};

// Random coefficients used in the most recent step. For Example III the
// vector-valued K^{2,k}, M^{2,2} are reported by their L² norms.
struct ApproxCoefficients {
    double K11 = 0, K21 = 0;
    double K02 = 0, K12 = 0, K22 = 0;
    double M02 = 0, M12 = 0, M22 = 0;
};

class ApproxIntegrator {
public:
    ApproxIntegrator(std::shared_ptr<const SolitonContext> ctx, const ApproxConfig& cfg);

    const ApproxState& state() const { return s_; }
    const ApproxConfig& config() const { return cfg_; }
    const ApproxCoefficients& coefficients() const { return k_; }

    // v₁ = σV^(1)(α₀); v₂ = σV^(1)(α₁) + σ²V^(2)(α₁)
    Vec v1() const;
    Vec v2() const;

    // Consumes the same increment as the frozen-frame step: Δβ (I) or a
    // statistically white W̃ (III).
    void step(const NoiseIncrement& inc);

private:
    std::shared_ptr<const SolitonContext> ctx_;
    ApproxConfig cfg_;
    ApproxState s_;
    ApproxCoefficients k_;
    ModulationFunctionals f0_;  // functionals at v = 0
    Vec r_sum0_;                // Σ R_i(0) at α = 1
    FrameLinearStepper lin_a_, lin_b_, lin_c_, lin_d_, lin_e_;

    void advance_v2(const TaylorFunctionals& tb, const Vec& vb, double alpha, const NoiseIncrement& inc,
                    FrameLinearStepper& lin_b, FrameLinearStepper& lin_c, Vec& Vb, Vec& Vc);
};

// Order-0 rescaling process alone, driven by a scalar Brownian motion:
//   I:   α₀ = exp((γ̄_d − ½γ̄_s²)σ²t − γ̄_sσβ_t) exactly,
//   III: dα₀ = γ̄_{d;III}σ²dt + ‖γ̄_⋄‖σα₀^{1/2}dβ (Euler–Maruyama, |·| guard).
struct Alpha0Path {
    SeriesRecord series;  // column "alpha0"
    long clamp_count = 0;
};
Alpha0Path alpha0_path(Example ex, double sigma, const ConstantsTable& k, double dt, double t_end, NoiseSource& noise,
                       int stride = 1);

// E[X_t^{−p}] for dX = δdt + sX^{1/2}dβ, X₀ = x0, via the noncentral χ²
// Poisson mixture. Terms whose moment diverges are dropped; their Poisson
// weight is reported in `neglected`.
struct NegativeMoment {
    double value = 0.0;
    double neglected = 0.0;
};
NegativeMoment bessel_negative_moment(double delta, double s2, double x0, double t, double p);
// ∫₀ᵗ E[X_s^{−p}] ds by composite Simpson on `panels` panels.
NegativeMoment integrated_negative_moment(double delta, double s2, double x0, double t, double p, int panels = 200);

struct TheoryStats {
    double mean_alpha0 = 1.0;
    double mean_c0 = 0.0, var_c0 = 0.0;
    double mean_omega0 = 0.0, var_omega0 = 0.0;  // variance: leading order
    double neglected = 0.0;                      // Example III moment truncation
};
TheoryStats theoretical_stats(Example ex, double sigma, const ConstantsTable& k, double t);

}  // namespace skdv
