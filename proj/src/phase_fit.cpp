#include "skdv/phase_fit.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "skdv/errors.hpp"
#include "skdv/soliton.hpp"
#include "skdv/spectral.hpp"

namespace skdv {

FitResidual fit_residual(const SpatialGrid& grid, const Vec& u, double c, double xi) {
    const Vec w = spectral_shift(grid, u, xi);
    Vec dw;
    grid.d1(w, dw);
    double f0 = 0, f1 = 0, j00 = 0, j01 = 0, j10 = 0, j11 = 0;
    for (int n = 0; n < grid.size(); ++n) {
        const double x = grid.x(n);
        const double p = soliton_profile(c, x);
        const double z = zeta_profile(c, x);
        const double pc = soliton_dc(c, x);
        const double zc = zeta_dc(c, x);
        const double r = w[n] - p;
        f0 += r * z;
        f1 += r * p;
        j00 += -pc * z + r * zc;
        j10 += -pc * p + r * pc;
        j01 += dw[n] * z;
        j11 += dw[n] * p;
    }
    const double h = grid.dx();
    return {{f0 * h, f1 * h}, {j00 * h, j01 * h, j10 * h, j11 * h}};
}

PhaseFit fit_phase(const SpatialGrid& grid, const Vec& u, double c_guess, double xi_guess, const FitOptions& opt) {
    if (!(c_guess > 0.0)) throw DomainError("fit_phase needs a positive amplitude guess");
    const double tol = opt.rel_tol * std::sqrt(grid.norm2(u));
    PhaseFit fit{c_guess, xi_guess, {}, 0};
    for (int it = 0; it <= opt.max_iter; ++it) {
        const FitResidual r = fit_residual(grid, u, fit.c_fit, fit.xi_fit);
        fit.residual = r.f;
        fit.iterations = it;
        if (std::max(std::abs(r.f[0]), std::abs(r.f[1])) <= tol) return fit;
        if (it == opt.max_iter) break;
        const auto& J = r.jac;
        const double det = J[0] * J[3] - J[1] * J[2];
        if (det == 0.0 || !std::isfinite(det)) break;
        const double dc = (J[3] * r.f[0] - J[1] * r.f[1]) / det;
        const double dxi = (-J[2] * r.f[0] + J[0] * r.f[1]) / det;
        double c_new = fit.c_fit - dc;
        if (!(c_new > 0.0)) c_new = 0.5 * fit.c_fit;
        fit.c_fit = c_new;
        fit.xi_fit -= dxi;
    }
    const double res = std::max(std::abs(fit.residual[0]), std::abs(fit.residual[1]));
    throw NoConvergence("phase fit did not converge", res);
}

std::array<double, 2> initial_guess(const SpatialGrid& grid, const Vec& u, double c_star) {
    const auto it = std::max_element(u.begin(), u.end());
    return {c_star, grid.x(int(it - u.begin()))};
}

Vec phase_shift(const Vec& xi, const Vec& c, double dt) {
    if (xi.size() != c.size()) throw DomainError("phase_shift needs equal-length series");
    Vec out(xi.size());
    double integral = 0.0;
    for (std::size_t j = 0; j < xi.size(); ++j) {
        if (j > 0) integral += 0.5 * dt * (c[j] + c[j - 1]);
        out[j] = xi[j] - integral;
    }
    return out;
}

DirectObserver fit_observer(const SpatialGrid& grid, double c_star) {
    struct Memory {
        bool started = false;
        double c = 0, xi = 0, t = 0, integral = 0;
    };
    auto mem = std::make_shared<Memory>();
    return [&grid, c_star, mem](const DirectState& s, SeriesRecord& rec) {
        double c0 = mem->c, x0 = mem->xi;
        if (!mem->started) {
            const auto g = initial_guess(grid, s.u, c_star);
            c0 = g[0];
            x0 = g[1];
        }
        const PhaseFit fit = fit_phase(grid, s.u, c0, x0);
        if (mem->started) mem->integral += 0.5 * (s.t - mem->t) * (fit.c_fit + mem->c);
        mem->started = true;
        mem->c = fit.c_fit;
        mem->xi = fit.xi_fit;
        mem->t = s.t;
        rec.push("c_fit", fit.c_fit);
        rec.push("xi_fit", fit.xi_fit);
        rec.push("Omega_fit", fit.xi_fit - mem->integral);
        rec.push("residual", std::max(std::abs(fit.residual[0]), std::abs(fit.residual[1])));
        rec.push("iterations", fit.iterations);
    };
}

}  // namespace skdv
