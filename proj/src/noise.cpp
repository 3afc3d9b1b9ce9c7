#include "skdv/noise.hpp"

#include <cmath>
#include <numbers>

#include "skdv/errors.hpp"
#include "skdv/spectral.hpp"

namespace skdv {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int r = 0; r < 10; ++r) {
        const std::uint64_t p0 = std::uint64_t(M0) * ctr[0];
        const std::uint64_t p1 = std::uint64_t(M1) * ctr[2];
        const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
        const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += W0;
        key[1] += W1;
    }
    return ctr;
}

NormalStream::NormalStream(std::uint64_t seed, std::uint64_t stream_id)
    : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)}, stream_(stream_id) {}

double NormalStream::next() {
    ++draws_;
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const auto r = philox4x32({std::uint32_t(block_), std::uint32_t(block_ >> 32), std::uint32_t(stream_),
                               std::uint32_t(stream_ >> 32)},
                              key_);
    ++block_;
    const std::uint64_t a = (std::uint64_t(r[0]) << 32) | r[1];
    const std::uint64_t b = (std::uint64_t(r[2]) << 32) | r[3];
    constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
    const double u1 = (double(a >> 11) + 0.5) * scale;
    const double u2 = double(b >> 11) * scale;
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    spare_ = rad * std::sin(th);
    has_spare_ = true;
    return rad * std::cos(th);
}

void NormalStream::fill(double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = next();
}

NoiseSource::NoiseSource(const NoiseSpec& spec, const SpatialGrid& grid)
    : spec_(spec), grid_(&grid), normals_(spec.seed, spec.stream_id) {
    if (spec.kind == NoiseKind::ColoredGaussian && !(spec.correlation_len > 0.0))
        throw DomainError("colored noise needs a positive correlation length");
}

NoiseIncrement NoiseSource::sample(double dt) {
    if (dt < 0.0) throw DomainError("noise increment needs dt >= 0");
    NoiseIncrement inc;
    inc.kind = spec_.kind;
    inc.dt = dt;
    if (spec_.kind == NoiseKind::Scalar) {
        inc.scalar_dW = std::sqrt(dt) * normals_.next();
        return inc;
    }
    const int m = grid_->size();
    inc.field_dW.resize(m);
    normals_.fill(inc.field_dW.data(), m);
    const double sd = std::sqrt(dt / grid_->dx());
    for (double& w : inc.field_dW) w *= sd;
    if (spec_.kind == NoiseKind::ColoredGaussian)
        inc.field_dW = apply_Q_alpha_half(*grid_, inc.field_dW, 1.0, spec_.correlation_len);
    return inc;
}

NoiseIncrement sample_increment(NoiseSource& source, double dt) { return source.sample(dt); }

NoiseIncrement rescale_noise(const NoiseIncrement& inc, double alpha, double xi, const SpatialGrid& grid) {
    if (!(alpha > 0.0)) throw DomainError("rescale_noise requires alpha > 0");
    if (inc.kind == NoiseKind::Scalar) return inc;

    const int m = grid.size();
    const double h = grid.dx();
    const double period = grid.period();
    const double x0 = grid.x(0);
    const Vec& w = inc.field_dW;
    Vec prefix(m + 1, 0.0);
    for (int n = 0; n < m; ++n) prefix[n + 1] = prefix[n] + w[n] * h;
    const double total = prefix[m];

    // Antiderivative of the piecewise-constant field, extended periodically.
    auto cumulative = [&](double y) {
        const double s = y - x0;
        const double wraps = std::floor(s / period);
        const double r = s - wraps * period;
        int cell = int(r / h);
        if (cell >= m) cell = m - 1;
        const double frac = r - cell * h;
        return wraps * total + prefix[cell] + frac * w[cell];
    };

    NoiseIncrement out = inc;
    const double width = alpha * h;
    const double gain = std::sqrt(alpha) / width;
    for (int n = 0; n < m; ++n) {
        const double a = alpha * grid.x(n) + xi;
        out.field_dW[n] = gain * (cumulative(a + width) - cumulative(a));
    }
    return out;
}

double q_kernel(double x, double alpha, double correlation_len) {
    const double z = correlation_len;
    return alpha / (2.0 * z) * std::exp(-std::numbers::pi * alpha * alpha * x * x / (4.0 * z * z));
}

Vec apply_Q_alpha(const SpatialGrid& grid, const Vec& f, double alpha, double correlation_len) {
    if (!(alpha > 0.0) || !(correlation_len > 0.0)) throw DomainError("Q_alpha needs alpha > 0 and zeta > 0");
    const double c = correlation_len * correlation_len / (std::numbers::pi * alpha * alpha);
    return apply_even_symbol(grid, f, [c](double k) { return std::exp(-c * k * k); });
}

Vec apply_Q_alpha_half(const SpatialGrid& grid, const Vec& f, double alpha, double correlation_len) {
    if (!(alpha > 0.0) || !(correlation_len > 0.0)) throw DomainError("Q_alpha needs alpha > 0 and zeta > 0");
    const double c = correlation_len * correlation_len / (2.0 * std::numbers::pi * alpha * alpha);
    return apply_even_symbol(grid, f, [c](double k) { return std::exp(-c * k * k); });
}

}  // namespace skdv
