#pragma once

#include <cstddef>
#include <vector>

namespace skdv {

using Vec = std::vector<double>;

// Periodic: stencils wrap around a ring of length (N+1)·dx.
// Truncated: stencil entries outside 0..N are dropped (zero exterior).
enum class Boundary { Periodic, Truncated };

// Uniform grid x_n = n·dx − L, n = 0..N, dx = 2L/N. Spectral shifts always
// treat the samples as a periodic ring of length (N+1)·dx.
class SpatialGrid {
public:
    SpatialGrid(double half_width, int cells, Boundary boundary = Boundary::Periodic);

    double L() const { return L_; }
    int N() const { return N_; }
    double dx() const { return dx_; }
    int size() const { return N_ + 1; }
    double period() const { return (N_ + 1) * dx_; }
    Boundary boundary() const { return boundary_; }
    const Vec& x() const { return x_; }
    double x(int n) const { return x_[n]; }

    int wrap(int n) const {
        const int m = size();
        n %= m;
        return n < 0 ? n + m : n;
    }
    // Whether the stencil entry (n, n+k) is kept by the boundary treatment.
    bool couples(int n, int k) const {
        return boundary_ == Boundary::Periodic || (n + k >= 0 && n + k < size());
    }

    // Trapezoid quadrature, Δx-weighted sum over the ring.
    double inner(const Vec& a, const Vec& b) const;
    double norm2(const Vec& a) const { return inner(a, a); }

    template <class T, class U>
    void d1(const std::vector<T>& u, std::vector<U>& out) const;
    template <class T, class U>
    void d2(const std::vector<T>& u, std::vector<U>& out) const;
    template <class T, class U>
    void d3(const std::vector<T>& u, std::vector<U>& out) const;

private:
    double L_;
    int N_;
    Boundary boundary_;
    double dx_;
    Vec x_;
};

template <class T, class U>
void SpatialGrid::d1(const std::vector<T>& u, std::vector<U>& out) const {
    const int m = size();
    const double s = 0.5 / dx_;
    out.resize(m);
    const bool ring = boundary_ == Boundary::Periodic;
    out[0] = (ring ? u[1] - u[m - 1] : u[1] + T{}) * s;
    for (int n = 1; n < m - 1; ++n) out[n] = (u[n + 1] - u[n - 1]) * s;
    out[m - 1] = (ring ? u[0] - u[m - 2] : T{} - u[m - 2]) * s;
}

template <class T, class U>
void SpatialGrid::d2(const std::vector<T>& u, std::vector<U>& out) const {
    const int m = size();
    const double s = 1.0 / (dx_ * dx_);
    out.resize(m);
    const bool ring = boundary_ == Boundary::Periodic;
    out[0] = (u[1] - 2.0 * u[0] + (ring ? u[m - 1] : T{})) * s;
    for (int n = 1; n < m - 1; ++n) out[n] = (u[n + 1] - 2.0 * u[n] + u[n - 1]) * s;
    out[m - 1] = ((ring ? u[0] : T{}) - 2.0 * u[m - 1] + u[m - 2]) * s;
}

template <class T, class U>
void SpatialGrid::d3(const std::vector<T>& u, std::vector<U>& out) const {
    const int m = size();
    const double s = 0.5 / (dx_ * dx_ * dx_);
    out.resize(m);
    auto at = [&](int k) { return couples(0, k) ? T(u[wrap(k)]) : T{}; };
    for (int n = 0; n < m; ++n) out[n] = (at(n + 2) - 2.0 * at(n + 1) + 2.0 * at(n - 1) - at(n - 2)) * s;
}

// Weighted norm √(Σ e^{2a x_n} v_n² Δx) over grid points with lo ≤ x_n ≤ hi.
double weighted_norm(const SpatialGrid& grid, const Vec& v, double a, double lo, double hi);

}  // namespace skdv
