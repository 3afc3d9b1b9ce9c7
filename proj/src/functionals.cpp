#include <cmath>

#include "skdv/errors.hpp"
#include "skdv/frozen.hpp"

namespace skdv {

namespace {

template <class T>
std::array<T, 2> solve2(const Mat2T<T>& kinv, const T& r0, const T& r1) {
    return {kinv.a00 * r0 + kinv.a01 * r1, kinv.a10 * r0 + kinv.a11 * r1};
}

}  // namespace

template <class T>
FunctionalsT<T> compute_functionals(const SolitonContext& ctx, const std::vector<T>& v, Example ex,
                                    bool with_sigma2_drift) {
    const SpatialGrid& g = ctx.grid();
    const int m = g.size();
    const double h = g.dx();
    const Vec& x = ctx.x();
    const Vec& phi = ctx.phi();
    const Vec& zeta = ctx.zeta();
    const Vec& phi_x = ctx.phi_x();

    // N(v) = −2v·D₁v, as in nonlinear_term
    std::vector<T> dv, nv(m);
    g.d1(v, dv);
    for (int n = 0; n < m; ++n) nv[n] = 2.0 * v[n] * dv[n];

    T k00{}, k01{}, k10{}, k11{}, s_phi{}, s_zeta{}, n_phi{}, n_zeta{};
    for (int n = 0; n < m; ++n) {
        const T u = phi[n] + v[n];
        const T ux = phi_x[n] + dv[n];
        const T gen = x[n] * ux + 2.0 * u;
        k00 += gen * phi[n];
        k01 += dv[n] * phi[n];
        k10 += gen * zeta[n];
        k11 += ux * zeta[n];
        s_phi += u * phi[n];
        s_zeta += u * zeta[n];
        n_phi -= nv[n] * phi[n];
        n_zeta -= nv[n] * zeta[n];
    }

    FunctionalsT<T> f;
    f.k = {k00 * h, k01 * h, k10 * h, k11 * h};
    if (std::abs(value(f.k.det())) < kDetThreshold * std::abs(ctx.det_k0()))
        throw SingularProjection("K(v) is too close to singular");
    f.kinv = f.k.inverse();
    const Mat2T<T>& ki = f.kinv;

    if (ex == Example::Scalar) {
        const auto s = solve2(ki, s_phi * h, s_zeta * h);
        f.gamma_s = s[0];
        f.mu_s = s[1];
    } else {
        f.gamma_w.resize(m);
        f.mu_w.resize(m);
        for (int n = 0; n < m; ++n) {
            const T u = phi[n] + v[n];
            const T up = u * phi[n];
            const T uz = u * zeta[n];
            f.gamma_w[n] = ki.a00 * up + ki.a01 * uz;
            f.mu_w[n] = ki.a10 * up + ki.a11 * uz;
        }
    }

    const auto d0 = solve2(ki, n_phi * h, n_zeta * h);
    f.gamma_d0 = d0[0];
    f.mu_d0 = d0[1];

    if (!with_sigma2_drift) return f;
    f.has_sigma2_drift = true;

    std::vector<T> d2v;
    g.d2(v, d2v);
    const Vec& phi_xx = ctx.phi_xx();

    T c_mm{}, c_gg{}, c_gm{};
    std::vector<T> dg, dm;
    if (ex == Example::Scalar) {
        c_mm = f.mu_s * f.mu_s;
        c_gg = f.gamma_s * f.gamma_s;
        c_gm = f.gamma_s * f.mu_s;
    } else {
        for (int n = 0; n < m; ++n) {
            c_mm += f.mu_w[n] * f.mu_w[n];
            c_gg += f.gamma_w[n] * f.gamma_w[n];
            c_gm += f.gamma_w[n] * f.mu_w[n];
        }
        c_mm = c_mm * h;
        c_gg = c_gg * h;
        c_gm = c_gm * h;
        g.d1(f.gamma_w, dg);
        g.d1(f.mu_w, dm);
    }

    T a_phi{}, a_zeta{};
    for (int n = 0; n < m; ++n) {
        const double xn = x[n];
        const T u = phi[n] + v[n];
        const T ux = phi_x[n] + dv[n];
        const T uxx = phi_xx[n] + d2v[n];
        const T gen = xn * ux + 2.0 * u;
        const T r1 = 0.5 * uxx;
        const T r2 = (0.5 * xn * xn) * uxx + (2.0 * xn) * ux + u;
        const T r3 = xn * uxx + 2.0 * ux;
        T term = -(c_mm * r1 + c_gg * r2 + c_gm * r3);
        if (ex == Example::Scalar) {
            term += f.gamma_s * gen + f.mu_s * ux;
        } else {
            term += gen * f.gamma_w[n] + ux * f.mu_w[n] + (xn * dg[n] + dm[n]) * u;
        }
        a_phi += term * phi[n];
        a_zeta += term * zeta[n];
    }
    const auto d = solve2(ki, a_phi * h, a_zeta * h);
    f.gamma_d = d[0];
    f.mu_d = d[1];
    return f;
}

template FunctionalsT<double> compute_functionals(const SolitonContext&, const std::vector<double>&, Example, bool);
template FunctionalsT<Jet> compute_functionals(const SolitonContext&, const std::vector<Jet>&, Example, bool);

ModulationFunctionals martingale_components(const SolitonContext& ctx, const Vec& v, Example ex) {
    return compute_functionals(ctx, v, ex, false);
}

std::pair<double, double> drift_components_0(const SolitonContext& ctx, const Vec& v) {
    const auto f = compute_functionals(ctx, v, Example::Scalar, false);
    return {f.gamma_d0, f.mu_d0};
}

std::pair<double, double> drift_components_sigma2(const SolitonContext& ctx, const Vec& v, Example ex) {
    const auto f = compute_functionals(ctx, v, ex, true);
    return {f.gamma_d, f.mu_d};
}

TaylorFunctionals taylor_functionals(const SolitonContext& ctx, const Vec& v, Example ex) {
    std::vector<Jet> ev(v.size());
    for (std::size_t n = 0; n < v.size(); ++n) ev[n] = Jet(0.0, v[n], 0.0);
    return compute_functionals(ctx, ev, ex, true);
}

Vec nonlinear_term(const SpatialGrid& grid, const Vec& v) {
    Vec dv;
    grid.d1(v, dv);
    Vec out(v.size());
    for (std::size_t n = 0; n < v.size(); ++n) out[n] = -2.0 * v[n] * dv[n];
    return out;
}

Vec drift_field(const SolitonContext& ctx, const Vec& v, double alpha, double sigma, Example ex,
                const ModulationFunctionals& f, bool include_nonlinear) {
    if (!f.has_sigma2_drift) throw DomainError("drift_field needs the sigma^2 drift components");
    const SpatialGrid& g = ctx.grid();
    const int m = g.size();
    const Vec& x = ctx.x();
    Vec dv, d2v;
    g.d1(v, dv);
    g.d2(v, d2v);
    const double a3 = 1.0 / (alpha * alpha * alpha);
    const double s2 = sigma * sigma * (ex == Example::Scalar ? 1.0 : 1.0 / alpha);

    double c_mm, c_gg, c_gm;
    Vec dg, dm;
    if (ex == Example::Scalar) {
        c_mm = f.mu_s * f.mu_s;
        c_gg = f.gamma_s * f.gamma_s;
        c_gm = f.gamma_s * f.mu_s;
    } else {
        c_mm = g.norm2(f.mu_w);
        c_gg = g.norm2(f.gamma_w);
        c_gm = g.inner(f.gamma_w, f.mu_w);
        g.d1(f.gamma_w, dg);
        g.d1(f.mu_w, dm);
    }

    Vec out(m);
    for (int n = 0; n < m; ++n) {
        const double xn = x[n];
        const double u = ctx.phi()[n] + v[n];
        const double ux = ctx.phi_x()[n] + dv[n];
        const double uxx = ctx.phi_xx()[n] + d2v[n];
        const double gen = xn * ux + 2.0 * u;
        const double r0 = -f.gamma_d0 * gen - f.mu_d0 * ux;
        double ri = 0.5 * c_mm * uxx + c_gg * (0.5 * xn * xn * uxx + 2.0 * xn * ux + u) + c_gm * (xn * uxx + 2.0 * ux);
        if (ex == Example::Scalar) {
            ri += -f.gamma_s * gen - f.mu_s * ux;
        } else {
            ri += -gen * f.gamma_w[n] - xn * u * dg[n] - ux * f.mu_w[n] - u * dm[n];
        }
        ri += f.gamma_d * gen + f.mu_d * ux;
        double r = a3 * r0 + s2 * ri;
        if (include_nonlinear) r += a3 * (-2.0 * v[n] * dv[n]);
        out[n] = r;
    }
    return out;
}

Vec drift_field(const SolitonContext& ctx, const Vec& v, double alpha, double sigma, Example ex) {
    return drift_field(ctx, v, alpha, sigma, ex, compute_functionals(ctx, v, ex, true), true);
}

template <class T>
std::vector<T> martingale_field(const SolitonContext& ctx, const std::vector<T>& v, const FunctionalsT<T>& f,
                                const NoiseIncrement& inc, Example ex) {
    const SpatialGrid& g = ctx.grid();
    const int m = g.size();
    const Vec& x = ctx.x();
    std::vector<T> dv;
    g.d1(v, dv);
    std::vector<T> out(m);
    if (ex == Example::Scalar) {
        if (inc.kind != NoiseKind::Scalar) throw DomainError("Example I expects a scalar increment");
        const double hs = inc.scalar_dW;
        for (int n = 0; n < m; ++n) {
            const T u = ctx.phi()[n] + v[n];
            const T ux = ctx.phi_x()[n] + dv[n];
            const T gen = x[n] * ux + 2.0 * u;
            out[n] = hs * (u - f.gamma_s * gen - f.mu_s * ux);
        }
        return out;
    }
    if (inc.kind != NoiseKind::WhiteSpaceTime) throw DomainError("Example III expects a white-noise increment");
    const Vec& hv = inc.field_dW;
    T pg{}, pm{};
    for (int n = 0; n < m; ++n) {
        pg += hv[n] * f.gamma_w[n];
        pm += hv[n] * f.mu_w[n];
    }
    pg = pg * g.dx();
    pm = pm * g.dx();
    for (int n = 0; n < m; ++n) {
        const T u = ctx.phi()[n] + v[n];
        const T ux = ctx.phi_x()[n] + dv[n];
        const T gen = x[n] * ux + 2.0 * u;
        out[n] = u * hv[n] - gen * pg - ux * pm;
    }
    return out;
}

template std::vector<double> martingale_field(const SolitonContext&, const std::vector<double>&,
                                              const FunctionalsT<double>&, const NoiseIncrement&, Example);
template std::vector<Jet> martingale_field(const SolitonContext&, const std::vector<Jet>&, const FunctionalsT<Jet>&,
                                           const NoiseIncrement&, Example);

Vec martingale_field(const SolitonContext& ctx, const Vec& v, const NoiseIncrement& inc, Example ex) {
    return martingale_field(ctx, v, compute_functionals(ctx, v, ex, false), inc, ex);
}

std::pair<double, double> orthogonality_residual(const SolitonContext& ctx, const Vec& v) {
    return {ctx.inner(v, ctx.phi()), ctx.inner(v, ctx.zeta())};
}

}  // namespace skdv
