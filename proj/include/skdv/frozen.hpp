#pragma once

#include <memory>
#include <optional>

#include "skdv/jet.hpp"
#include "skdv/noise.hpp"
#include "skdv/projection.hpp"

namespace skdv {

// Example I: M(u)[h] = u·h with a scalar Brownian motion.
// Example III: M(u)[h] = u·h with space-time white noise.
enum class Example { Scalar, White };

// Modulation functionals at a perturbation v. T = double evaluates them;
// T = Jet evaluates f(εv) and exposes the Taylor coefficients in ε.
template <class T>
struct FunctionalsT {
    Mat2T<T> k, kinv;
    T gamma_s{}, mu_s{};              // Example I
    std::vector<T> gamma_w, mu_w;     // Example III: γ̄_⋄, μ̄_⋄
    T gamma_d0{}, mu_d0{};            // K⁻¹ projections of N(v) = −∂ₓ(v²)
    T gamma_d{}, mu_d{};              // γ̄_{d;I}/μ̄_{d;I} or γ̄_{d;III}/μ̄_{d;III}
    bool has_sigma2_drift = false;
};

using ModulationFunctionals = FunctionalsT<double>;
using TaylorFunctionals = FunctionalsT<Jet>;

// Throws SingularProjection when |det K(v)| < kDetThreshold·|det K(0)|.
template <class T>
FunctionalsT<T> compute_functionals(const SolitonContext& ctx, const std::vector<T>& v, Example ex,
                                    bool with_sigma2_drift);

ModulationFunctionals martingale_components(const SolitonContext& ctx, const Vec& v, Example ex);
std::pair<double, double> drift_components_0(const SolitonContext& ctx, const Vec& v);
std::pair<double, double> drift_components_sigma2(const SolitonContext& ctx, const Vec& v, Example ex);

// Evaluates all functionals at εv as jets: c0 = f(0), c1 = [f]^(1)(v), c2 = [f]^(2)(v).
TaylorFunctionals taylor_functionals(const SolitonContext& ctx, const Vec& v, Example ex);

// R^σ(v,α) = α⁻³[N(v) + R₀(v)] + σ²·s·Σ_{i=1..6} R_i(v), s = 1 (I) or α⁻¹ (III).
// With include_nonlinear = false the N(v) term is omitted.
Vec drift_field(const SolitonContext& ctx, const Vec& v, double alpha, double sigma, Example ex,
                const ModulationFunctionals& f, bool include_nonlinear = true);
Vec drift_field(const SolitonContext& ctx, const Vec& v, double alpha, double sigma, Example ex);

// N(v) = −∂ₓ(v²) = −2v∂ₓv with D₁.
Vec nonlinear_term(const SpatialGrid& grid, const Vec& v);

// S(v)[h] = (φ+v)h − (x∂ₓ+2)(φ+v)⟨h, γ̄_s⟩ − ∂ₓ(φ+v)⟨h, μ̄_s⟩.
// Example I pairs with inc.scalar_dW, Example III with inc.field_dW.
template <class T>
std::vector<T> martingale_field(const SolitonContext& ctx, const std::vector<T>& v, const FunctionalsT<T>& f,
                                const NoiseIncrement& inc, Example ex);
Vec martingale_field(const SolitonContext& ctx, const Vec& v, const NoiseIncrement& inc, Example ex);

// Advances w ↦ (I − Δt/2·a·L₀)⁻¹[(I + Δt/2·a·L₀)w + rhs] where a = α⁻³.
// Keeps the last factorization and reuses it while a is unchanged.
class FrameLinearStepper {
public:
    FrameLinearStepper(const SolitonContext& ctx, double dt) : ctx_(&ctx), dt_(dt) {}
    void advance(Vec& w, double a, const Vec& rhs);

private:
    const SolitonContext* ctx_;
    double dt_;
    double cached_a_ = -1.0;
    std::optional<CyclicBandedSolver> solver_;
    Vec lw_;
};

struct ModulationState {
    Vec v;
    Vec v_prev;
    double alpha = 1.0;
    double alpha_prev = 1.0;
    double xi = 0.0;
    double t = 0.0;
    long step_index = 0;
};

ModulationState make_modulation_state(const SolitonContext& ctx);

inline constexpr double kFrameCollapseAlpha = 1e-3;

// c(t) = c*α⁻²
double velocity(const ModulationState& s, double c_star);

struct FrozenConfig {
    double dt = 1e-3;
    double sigma = 0.0;
    Example example = Example::Scalar;
};

// One path of the frozen-frame system. Not shareable across threads; the
// context is.
class FrozenScheme {
public:
    FrozenScheme(std::shared_ptr<const SolitonContext> ctx, const FrozenConfig& cfg);

    const SolitonContext& context() const { return *ctx_; }
    const FrozenConfig& config() const { return cfg_; }

    // Consumes a statistically white increment W̃ (Example III) or Δβ (Example I).
    void step(ModulationState& s, const NoiseIncrement& inc);
    // Functionals used by the most recent step, evaluated at the pre-step v.
    const ModulationFunctionals& last_functionals() const { return last_; }

private:
    std::shared_ptr<const SolitonContext> ctx_;
    FrozenConfig cfg_;
    FrameLinearStepper linear_;
    ModulationFunctionals last_;
};

// ⟨v, φ⟩ and ⟨v, ζ⟩
std::pair<double, double> orthogonality_residual(const SolitonContext& ctx, const Vec& v);

}  // namespace skdv
