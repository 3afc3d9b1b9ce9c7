#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "skdv/grid.hpp"

namespace skdv {

using Complex = std::complex<double>;

// Real-to-complex DFT of length n backed by FFTW. Plans are created once per
// length, cached, and executed through the thread-safe new-array interface.
class Fft {
public:
    explicit Fft(int n);
    int size() const { return n_; }
    int modes() const { return n_ / 2 + 1; }
    void forward(const double* in, Complex* out) const;
    // Unnormalized inverse: backward(forward(f)) = n·f.
    void backward(const Complex* in, double* out) const;

private:
    int n_;
    void* fwd_;
    void* bwd_;
};

// Angular wavenumber of mode j on the periodic ring of the grid.
double wavenumber(const SpatialGrid& grid, int j);

// Multiplies the DFT of f by symbol(k) (k = angular wavenumber ≥ 0, applied
// symmetrically to ±k). The symbol must be even for a real result.
Vec apply_even_symbol(const SpatialGrid& grid, const Vec& f, const std::function<double(double)>& symbol);

// Periodic translation: returns u(x + xi) via the FFT phase shift.
Vec spectral_shift(const SpatialGrid& grid, const Vec& u, double xi);

// Evaluates the trigonometric interpolant of f at arbitrary points. O(n·m).
Vec spectral_evaluate(const SpatialGrid& grid, const Vec& f, const Vec& points);

// (T_{α,ξ} f)(x) = f(αx + ξ) for a smooth periodic grid function f.
Vec transform_T(const SpatialGrid& grid, const Vec& f, double alpha, double xi);

}  // namespace skdv
