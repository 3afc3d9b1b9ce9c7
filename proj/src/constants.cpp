#include "skdv/constants.hpp"

#include <cmath>
#include <numbers>

#include "skdv/frozen.hpp"

namespace skdv {

ConstantsTable ConstantsTable::reference(double c) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double rc = std::sqrt(c);
    ConstantsTable t;
    t.c_star = c;
    t.gamma_s_I = 2.0 / 3.0;
    t.mu_s_I = -2.0 / (3.0 * rc);
    t.gamma_d_I = 74.0 / 135.0 + 4.0 * pi2 / 405.0;
    t.mu_d_I = (16.0 * pi2 / 405.0 - 34.0 / 45.0) / rc;
    t.gamma_w_norm2 = 4.0 / 35.0 * rc;
    t.mu_w_norm2 = 0.435 / rc;
    t.gamma_d_III = 0.093 * rc;
    t.mu_d_III = -0.1;
    return t;
}

ConstantsTable ConstantsTable::quadrature(const SolitonContext& ctx) {
    const Vec zero(ctx.size(), 0.0);
    const ModulationFunctionals fi = compute_functionals(ctx, zero, Example::Scalar, true);
    const ModulationFunctionals fw = compute_functionals(ctx, zero, Example::White, true);
    ConstantsTable t;
    t.c_star = ctx.c_star();
    t.gamma_s_I = fi.gamma_s;
    t.mu_s_I = fi.mu_s;
    t.gamma_d_I = fi.gamma_d;
    t.mu_d_I = fi.mu_d;
    t.gamma_w_norm2 = ctx.grid().norm2(fw.gamma_w);
    t.mu_w_norm2 = ctx.grid().norm2(fw.mu_w);
    t.gamma_d_III = fw.gamma_d;
    t.mu_d_III = fw.mu_d;
    return t;
}

Vec gamma_diamond_0(const SolitonContext& ctx) {
    const double c = ctx.c_star();
    const double k = 1.0 / (9.0 * c * std::sqrt(c));
    Vec out(ctx.size());
    for (int n = 0; n < ctx.size(); ++n) out[n] = k * ctx.phi()[n] * ctx.phi()[n];
    return out;
}

Vec mu_diamond_0(const SolitonContext& ctx) {
    const double c = ctx.c_star();
    Vec out(ctx.size());
    for (int n = 0; n < ctx.size(); ++n) {
        const double p = ctx.phi()[n];
        out[n] = 2.0 / 9.0 * (p * p / (c * c) - p * ctx.zeta()[n] / std::sqrt(c));
    }
    return out;
}

}  // namespace skdv
