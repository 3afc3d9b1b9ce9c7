#pragma once

#include <memory>

#include "skdv/banded.hpp"
#include "skdv/grid.hpp"

namespace skdv {

// φ_c(x) = (3c/2)·sech²(√c·x/2)
double soliton_profile(double c, double x);
double soliton_dx(double c, double x);
double soliton_dxx(double c, double x);
double soliton_dc(double c, double x);
// ζ_c(x) = ∫_{−∞}^x ∂_cφ_c
//        = (3/(2√c))(1 + tanh z) + (3x/4)·sech² z,  z = √c·x/2
double zeta_profile(double c, double x);
double zeta_dc(double c, double x);

Vec sample(const SpatialGrid& grid, double (*f)(double, double), double c);

struct NormWindow {
    double lo, hi;
};

// Everything about the reference soliton φ_{c*} that the frozen frame needs,
// sampled once on the grid. Immutable after construction.
class SolitonContext {
public:
    SolitonContext(std::shared_ptr<const SpatialGrid> grid, double c_star, double weight_a, NormWindow window);
    SolitonContext(const SpatialGrid& grid, double c_star, double weight_a, NormWindow window)
        : SolitonContext(std::make_shared<const SpatialGrid>(grid), c_star, weight_a, window) {}

    const SpatialGrid& grid() const { return *grid_; }
    std::shared_ptr<const SpatialGrid> grid_ptr() const { return grid_; }
    int size() const { return grid_->size(); }
    double c_star() const { return c_star_; }
    double weight_a() const { return weight_a_; }
    NormWindow window() const { return window_; }

    const Vec& x() const { return grid_->x(); }
    const Vec& phi() const { return phi_; }
    const Vec& phi_x() const { return phi_x_; }
    const Vec& phi_xx() const { return phi_xx_; }
    const Vec& zeta() const { return zeta_; }
    const Vec& dphi_dc() const { return dphi_dc_; }
    // (x∂ₓ + 2)φ, (½x²∂ₓ² + 2x∂ₓ + 1)φ, (x∂ₓ² + 2∂ₓ)φ
    const Vec& gen_phi() const { return gen_phi_; }
    const Vec& quad_phi() const { return quad_phi_; }
    const Vec& mixed_phi() const { return mixed_phi_; }

    // L₀ = −D₃ + c*D₁ − 2D₁·Diag(φ)
    const CyclicBandOperator& L0() const { return L0_; }

    double inner(const Vec& a, const Vec& b) const { return grid_->inner(a, b); }
    double norm_a(const Vec& v) const { return weighted_norm(*grid_, v, weight_a_, window_.lo, window_.hi); }

    // det K(0) = −(81/2)c*²
    double det_k0() const { return -40.5 * c_star_ * c_star_; }

private:
    std::shared_ptr<const SpatialGrid> grid_;
    double c_star_, weight_a_;
    NormWindow window_;
    Vec phi_, phi_x_, phi_xx_, zeta_, dphi_dc_;
    Vec gen_phi_, quad_phi_, mixed_phi_;
    CyclicBandOperator L0_;
};

// Default norm window: the whole domain clipped to x ≤ 0.4L.
NormWindow default_window(const SpatialGrid& grid);

}  // namespace skdv
