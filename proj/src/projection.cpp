#include "skdv/projection.hpp"

#include <cmath>

#include "skdv/errors.hpp"

namespace skdv {

ProjectionMatrix k_matrix(const SolitonContext& ctx, const Vec& v) {
    const SpatialGrid& g = ctx.grid();
    const int m = g.size();
    Vec dv;
    g.d1(v, dv);
    double b1 = 0, b2 = 0, b3 = 0, b4 = 0, k00 = 0, k10 = 0, k11 = 0;
    const Vec& x = ctx.x();
    const Vec& phi = ctx.phi();
    const Vec& zeta = ctx.zeta();
    for (int n = 0; n < m; ++n) {
        const double gv = x[n] * dv[n] + 2.0 * v[n];
        b1 += gv * phi[n];
        b2 += dv[n] * phi[n];
        b3 += gv * zeta[n];
        b4 += dv[n] * zeta[n];
        k00 += ctx.gen_phi()[n] * phi[n];
        k10 += ctx.gen_phi()[n] * zeta[n];
        k11 += ctx.phi_x()[n] * zeta[n];
    }
    const double h = g.dx();
    ProjectionMatrix p;
    p.b1 = b1 * h;
    p.b2 = b2 * h;
    p.b3 = b3 * h;
    p.b4 = b4 * h;
    p.entries = {k00 * h + p.b1, p.b2, k10 * h + p.b3, k11 * h + p.b4};
    return p;
}

Mat2 k_inverse_taylor(double c, double b1, double b2, double b3, double b4, int order) {
    const double rc = std::sqrt(c);
    switch (order) {
    case 0:
        return (1.0 / 9.0) * Mat2{1.0 / (c * rc), 0.0, 2.0 / (c * c), -2.0 / rc};
    case 1: {
        const double c2 = c * c;
        const double c52 = c2 * rc;
        const double c72 = c2 * c * rc;
        const double c4 = c2 * c2;
        // −K₀⁻¹BK₀⁻¹ with B the first-order part of K(v)
        const double a00 = -(b1 / (c2 * c) + 2.0 * b2 / c72) / 2.0;
        const double a01 = b2 / c2;
        const double a10 = b3 / c2 + 2.0 * b4 / c52 - b1 / c72 - 2.0 * b2 / c4;
        const double a11 = -2.0 * b4 / c + 2.0 * b2 / c52;
        return (2.0 / 81.0) * Mat2{a00, a01, a10, a11};
    }
    case 2: {
        const double c2 = c * c;
        const double c3 = c2 * c;
        const double c4 = c2 * c2;
        const double s1 = -2.0 * b4 / (c2 * rc) + b1 / (c3 * rc) + 2.0 * b2 / c4;
        const double s2 = -4.0 * b4 * b4 / c3 - b1 * b1 / (c4 * c) - 4.0 * b2 * b2 / (c3 * c3) +
                          2.0 * b1 * b4 / c4 + 8.0 * b2 * b4 / (c4 * rc) - 4.0 * b1 * b2 / (c4 * c * rc) +
                          2.0 * b3 * b2 / c4;
        const Mat2 adj{b4, -b2, -b3, b1};
        const Mat2 base{-0.5 * rc, 0.0, -1.0, c * rc};
        return (2.0 / 729.0) * (s1 * adj + s2 * base);
    }
    default:
        throw DomainError("k_inverse_taylor order must be 0, 1 or 2");
    }
}

Mat2 k_inverse_taylor(const SolitonContext& ctx, const Vec& v, int order) {
    const ProjectionMatrix p = k_matrix(ctx, v);
    return k_inverse_taylor(ctx.c_star(), p.b1, p.b2, p.b3, p.b4, order);
}

}  // namespace skdv
