#include "skdv/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "skdv/errors.hpp"

namespace skdv {

namespace {

struct PlanPair {
    fftw_plan fwd;
    fftw_plan bwd;
};

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

PlanPair plans_for(int n) {
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(plan_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p{fftw_plan_dft_r2c_1d(n, in, out, flags), fftw_plan_dft_c2r_1d(n, out, in, flags)};
    fftw_free(in);
    fftw_free(out);
    cache.emplace(n, p);
    return p;
}

}  // namespace

Fft::Fft(int n) : n_(n) {
    if (n < 2) throw DomainError("FFT length must be at least 2");
    const PlanPair p = plans_for(n);
    fwd_ = p.fwd;
    bwd_ = p.bwd;
}

void Fft::forward(const double* in, Complex* out) const {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(fwd_), const_cast<double*>(in),
                         reinterpret_cast<fftw_complex*>(out));
}

void Fft::backward(const Complex* in, double* out) const {
    // c2r destroys its input, so work on a copy.
    std::vector<Complex> tmp(in, in + modes());
    fftw_execute_dft_c2r(static_cast<fftw_plan>(bwd_), reinterpret_cast<fftw_complex*>(tmp.data()), out);
}

double wavenumber(const SpatialGrid& grid, int j) { return 2.0 * std::numbers::pi * j / grid.period(); }

Vec apply_even_symbol(const SpatialGrid& grid, const Vec& f, const std::function<double(double)>& symbol) {
    const int n = grid.size();
    Fft fft(n);
    std::vector<Complex> hat(fft.modes());
    fft.forward(f.data(), hat.data());
    for (int j = 0; j < fft.modes(); ++j) hat[j] *= symbol(wavenumber(grid, j)) / n;
    Vec out(n);
    fft.backward(hat.data(), out.data());
    return out;
}

Vec spectral_shift(const SpatialGrid& grid, const Vec& u, double xi) {
    const int n = grid.size();
    Fft fft(n);
    std::vector<Complex> hat(fft.modes());
    fft.forward(u.data(), hat.data());
    for (int j = 0; j < fft.modes(); ++j) {
        const double kx = wavenumber(grid, j) * xi;
        if (2 * j == n) hat[j] *= std::cos(kx) / n;
        else hat[j] *= Complex(std::cos(kx), std::sin(kx)) / double(n);
    }
    Vec out(n);
    fft.backward(hat.data(), out.data());
    return out;
}

Vec spectral_evaluate(const SpatialGrid& grid, const Vec& f, const Vec& points) {
    const int n = grid.size();
    Fft fft(n);
    std::vector<Complex> hat(fft.modes());
    fft.forward(f.data(), hat.data());
    const double x0 = grid.x(0);
    Vec out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double y = points[i] - x0;
        double s = hat[0].real();
        for (int j = 1; j < fft.modes(); ++j) {
            const double ky = wavenumber(grid, j) * y;
            const double re = hat[j].real() * std::cos(ky) - hat[j].imag() * std::sin(ky);
            s += (2 * j == n) ? re : 2.0 * re;
        }
        out[i] = s / n;
    }
    return out;
}

Vec transform_T(const SpatialGrid& grid, const Vec& f, double alpha, double xi) {
    if (!(alpha > 0.0)) throw DomainError("T_{alpha,xi} requires alpha > 0");
    Vec pts(grid.size());
    for (int n = 0; n < grid.size(); ++n) pts[n] = alpha * grid.x(n) + xi;
    return spectral_evaluate(grid, f, pts);
}

}  // namespace skdv
