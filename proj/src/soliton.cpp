#include "skdv/soliton.hpp"

#include <cmath>

#include "skdv/errors.hpp"

namespace skdv {

namespace {

void check_amplitude(double c) {
    if (!(c > 0.0)) throw DomainError("soliton amplitude must be positive");
}

double sech2(double z) {
    const double ch = std::cosh(z);
    return 1.0 / (ch * ch);
}

// 1 + tanh z without cancellation for z ≪ 0
double one_plus_tanh(double z) {
    if (z >= 0.0) return 1.0 + std::tanh(z);
    const double e = std::exp(2.0 * z);
    return 2.0 * e / (1.0 + e);
}

}  // namespace

double soliton_profile(double c, double x) {
    check_amplitude(c);
    return 1.5 * c * sech2(0.5 * std::sqrt(c) * x);
}

double soliton_dx(double c, double x) {
    check_amplitude(c);
    const double z = 0.5 * std::sqrt(c) * x;
    return -1.5 * c * std::sqrt(c) * sech2(z) * std::tanh(z);
}

double soliton_dxx(double c, double x) {
    check_amplitude(c);
    const double s = sech2(0.5 * std::sqrt(c) * x);
    return 0.75 * c * c * (2.0 * s - 3.0 * s * s);
}

double soliton_dc(double c, double x) {
    check_amplitude(c);
    const double z = 0.5 * std::sqrt(c) * x;
    const double s = sech2(z);
    return 1.5 * s - 0.75 * std::sqrt(c) * x * s * std::tanh(z);
}

double zeta_profile(double c, double x) {
    check_amplitude(c);
    const double z = 0.5 * std::sqrt(c) * x;
    return 1.5 / std::sqrt(c) * one_plus_tanh(z) + 0.75 * x * sech2(z);
}

double zeta_dc(double c, double x) {
    check_amplitude(c);
    const double rc = std::sqrt(c);
    const double z = 0.5 * rc * x;
    const double s = sech2(z);
    const double dz = z / (2.0 * c);
    return -0.75 / (c * rc) * one_plus_tanh(z) + 1.5 / rc * s * dz - 1.5 * x * s * std::tanh(z) * dz;
}

Vec sample(const SpatialGrid& grid, double (*f)(double, double), double c) {
    Vec out(grid.size());
    for (int n = 0; n < grid.size(); ++n) out[n] = f(c, grid.x(n));
    return out;
}

NormWindow default_window(const SpatialGrid& grid) { return {-grid.L(), 0.4 * grid.L()}; }

SolitonContext::SolitonContext(std::shared_ptr<const SpatialGrid> grid, double c_star, double weight_a,
                               NormWindow window)
    : grid_(std::move(grid)), c_star_(c_star), weight_a_(weight_a), window_(window),
      L0_(grid_->size(), 2) {
    check_amplitude(c_star);
    if (!(weight_a > 0.0 && weight_a < std::sqrt(c_star)))
        throw DomainError("weight exponent must satisfy 0 < a < sqrt(c*)");
    if (window.lo > window.hi || window.lo < -grid_->L() - 1e-12 || window.hi > grid_->L() + 1e-12)
        throw DomainError("norm window must lie inside [-L, L]");

    const SpatialGrid& g = *grid_;
    const int m = g.size();
    phi_ = sample(g, soliton_profile, c_star);
    phi_x_ = sample(g, soliton_dx, c_star);
    phi_xx_ = sample(g, soliton_dxx, c_star);
    zeta_ = sample(g, zeta_profile, c_star);
    dphi_dc_ = sample(g, soliton_dc, c_star);

    gen_phi_.resize(m);
    quad_phi_.resize(m);
    mixed_phi_.resize(m);
    for (int n = 0; n < m; ++n) {
        const double x = g.x(n);
        gen_phi_[n] = x * phi_x_[n] + 2.0 * phi_[n];
        quad_phi_[n] = 0.5 * x * x * phi_xx_[n] + 2.0 * x * phi_x_[n] + phi_[n];
        mixed_phi_[n] = x * phi_xx_[n] + 2.0 * phi_x_[n];
    }

    const double h = g.dx();
    const double s1 = 0.5 / h;
    const double s3 = 0.5 / (h * h * h);
    for (int i = 0; i < m; ++i) {
        const double phi_p = phi_[g.wrap(i + 1)];
        const double phi_m = phi_[g.wrap(i - 1)];
        L0_.at(i, 2) = -s3;
        L0_.at(i, 1) = 2.0 * s3 + c_star * s1 - 2.0 * s1 * phi_p;
        L0_.at(i, 0) = 0.0;
        L0_.at(i, -1) = -2.0 * s3 - c_star * s1 + 2.0 * s1 * phi_m;
        L0_.at(i, -2) = s3;
        for (int k = -2; k <= 2; ++k)
            if (!g.couples(i, k)) L0_.at(i, k) = 0.0;
    }
}

}  // namespace skdv
