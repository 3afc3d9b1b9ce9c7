#include "skdv/grid.hpp"

#include <cmath>

#include "skdv/errors.hpp"

namespace skdv {

SpatialGrid::SpatialGrid(double half_width, int cells, Boundary boundary)
    : L_(half_width), N_(cells), boundary_(boundary) {
    if (!(half_width > 0.0)) throw DomainError("grid half-width must be positive");
    if (cells < 8) throw DomainError("grid needs at least 8 cells");
    dx_ = 2.0 * L_ / N_;
    x_.resize(N_ + 1);
    for (int n = 0; n <= N_; ++n) x_[n] = n * dx_ - L_;
}

double SpatialGrid::inner(const Vec& a, const Vec& b) const {
    double s = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) s += a[n] * b[n];
    return s * dx_;
}

double weighted_norm(const SpatialGrid& grid, const Vec& v, double a, double lo, double hi) {
    const double tol = 1e-9 * grid.dx();
    if (lo < -grid.L() - tol || hi > grid.L() + tol || lo > hi)
        throw DomainError("weighted_norm window must lie inside [-L, L]");
    double s = 0.0;
    for (int n = 0; n < grid.size(); ++n) {
        const double x = grid.x(n);
        if (x < lo - tol || x > hi + tol) continue;
        s += std::exp(2.0 * a * x) * v[n] * v[n];
    }
    return std::sqrt(s * grid.dx());
}

}  // namespace skdv
