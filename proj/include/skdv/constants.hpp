#pragma once

#include "skdv/soliton.hpp"

namespace skdv {

// Values of the modulation functionals at v = 0 as functions of c*.
struct ConstantsTable {
    double c_star = 1.0;
    double gamma_s_I = 0, mu_s_I = 0;
    double gamma_d_I = 0, mu_d_I = 0;
    double gamma_w_norm2 = 0, mu_w_norm2 = 0;
    double gamma_d_III = 0, mu_d_III = 0;

    // Closed forms where they exist; the three numerically known entries
    // take their rounded reference values 0.093c*^{1/2}, −0.1, 0.435c*^{−1/2}.
    static ConstantsTable reference(double c_star);
    // Every entry from grid quadrature of the functionals at v = 0.
    static ConstantsTable quadrature(const SolitonContext& ctx);
};

// γ̄_⋄(0) = (1/9)c*^{−3/2}φ²
Vec gamma_diamond_0(const SolitonContext& ctx);
// μ̄_⋄(0) = (2/9)(c*^{−2}φ² − c*^{−1/2}φζ)
Vec mu_diamond_0(const SolitonContext& ctx);

}  // namespace skdv
