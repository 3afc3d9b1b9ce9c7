#pragma once

#include <array>
#include <cstdint>

#include "skdv/grid.hpp"

namespace skdv {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

enum class NoiseKind { Scalar, WhiteSpaceTime, ColoredGaussian };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::Scalar;
    double correlation_len = 1.0;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

// Standard normals for one (seed, stream_id) pair. Draw k comes from
// Philox block k/2 with key = seed and counter = (k/2, stream_id), mapped
// through Box–Muller; the sequence is a pure function of (seed, stream_id).
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream_id);
    double next();
    void fill(double* out, std::size_t n);
    std::uint64_t draws() const { return draws_; }

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::uint64_t draws_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct NoiseIncrement {
    NoiseKind kind = NoiseKind::Scalar;
    double dt = 0.0;
    double scalar_dW = 0.0;
    Vec field_dW;
};

class NoiseSource {
public:
    NoiseSource(const NoiseSpec& spec, const SpatialGrid& grid);
    const NoiseSpec& spec() const { return spec_; }
    NoiseIncrement sample(double dt);

private:
    NoiseSpec spec_;
    const SpatialGrid* grid_;
    NormalStream normals_;
};

// Scalar: one draw with sd √dt. White: N+1 draws with sd √(dt/dx).
// Colored: white field convolved with q_{1/2}, covariance q(x−y)·dt.
NoiseIncrement sample_increment(NoiseSource& source, double dt);

// W̃ = α^{1/2}·T_{α,ξ}ΔW for a discrete white-noise field. Cell n is
// [x_n, x_n + dx); its image [αx_n + ξ, α(x_n + dx) + ξ) is integrated
// exactly against the piecewise-constant input (periodic wrap), so the
// isometry E⟨W̃,w₁⟩⟨W̃,w₂⟩ = dt⟨w₁,w₂⟩ holds for smooth w at any α.
// Scalar increments are returned unchanged.
NoiseIncrement rescale_noise(const NoiseIncrement& inc, double alpha, double xi, const SpatialGrid& grid);

// Q_α f = α q(α·) * f with q(x) = (1/(2ζ))e^{−πx²/(4ζ²)}, as a circular
// convolution with the periodized kernel (DFT symbol e^{−ζ²k²/(πα²)}).
Vec apply_Q_alpha(const SpatialGrid& grid, const Vec& f, double alpha, double correlation_len);
// (Q^{1/2})_α f: symbol e^{−ζ²k²/(2πα²)}.
Vec apply_Q_alpha_half(const SpatialGrid& grid, const Vec& f, double alpha, double correlation_len);
// The kernel itself, (α/(2ζ))e^{−πα²x²/(4ζ²)}.
double q_kernel(double x, double alpha, double correlation_len);

}  // namespace skdv
