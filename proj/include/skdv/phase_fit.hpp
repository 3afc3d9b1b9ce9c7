#pragma once

#include <array>

#include "skdv/direct.hpp"

namespace skdv {

struct PhaseFit {
    double c_fit = 0.0;
    double xi_fit = 0.0;
    std::array<double, 2> residual{};  // ⟨u(·+ξ)−φ_c, ζ_c⟩, ⟨u(·+ξ)−φ_c, φ_c⟩
    int iterations = 0;
};

struct FitOptions {
    double rel_tol = 1e-10;
    int max_iter = 50;
};

// Residual map of the fitted-parameter equations and its analytic Jacobian.
struct FitResidual {
    std::array<double, 2> f;
    std::array<double, 4> jac;  // row-major ∂(f₀,f₁)/∂(c,ξ)
};
FitResidual fit_residual(const SpatialGrid& grid, const Vec& u, double c, double xi);

// Newton on the residual map, u translated by FFT phase shift.
// Throws NoConvergence with the last residual, DomainError if c leaves (0, ∞).
PhaseFit fit_phase(const SpatialGrid& grid, const Vec& u, double c_guess, double xi_guess,
                   const FitOptions& opt = {});

// Initial guess at t = 0: (c*, grid argmax of u).
std::array<double, 2> initial_guess(const SpatialGrid& grid, const Vec& u, double c_star);

// Ω(t_j) = ξ(t_j) − ∫₀^{t_j} c ds (trapezoid).
Vec phase_shift(const Vec& xi, const Vec& c, double dt);

// Observer for direct runs: columns c_fit, xi_fit, Omega_fit, residual,
// iterations. Warm-started from the previous record; the Ω integral uses
// the recorded samples, so the stride should be small.
DirectObserver fit_observer(const SpatialGrid& grid, double c_star);

}  // namespace skdv
