#include "skdv/direct.hpp"

#include <cmath>
#include <numeric>

#include "skdv/errors.hpp"

namespace skdv {

namespace {

CyclicBandOperator d3_operator(const SpatialGrid& g) {
    CyclicBandOperator op(g.size(), 2);
    const double s = 0.5 / (g.dx() * g.dx() * g.dx());
    for (int i = 0; i < g.size(); ++i) {
        op.at(i, 2) = s;
        op.at(i, 1) = -2.0 * s;
        op.at(i, -1) = 2.0 * s;
        op.at(i, -2) = -s;
        for (int k = -2; k <= 2; ++k)
            if (!g.couples(i, k)) op.at(i, k) = 0.0;
    }
    return op;
}

void check_finite(const Vec& u, long step, double t) {
    const double s = std::accumulate(u.begin(), u.end(), 0.0);
    if (!std::isfinite(s)) throw BlowUp("non-finite solution in original-frame scheme", step, t);
}

void add_noise(Vec& rhs, const Vec& u, double sigma, const NoiseIncrement& inc) {
    if (sigma == 0.0) return;
    if (inc.kind == NoiseKind::Scalar) {
        const double s = sigma * inc.scalar_dW;
        for (std::size_t n = 0; n < u.size(); ++n) rhs[n] += s * u[n];
    } else {
        for (std::size_t n = 0; n < u.size(); ++n) rhs[n] += sigma * u[n] * inc.field_dW[n];
    }
}

}  // namespace

DirectState make_direct_state(const Vec& u0) {
    DirectState s;
    s.u = u0;
    s.u_prev = u0;
    return s;
}

DirectScheme::DirectScheme(std::shared_ptr<const SpatialGrid> grid, double dt, double sigma)
    : grid_(std::move(grid)), dt_(dt), sigma_(sigma), explicit_op_(grid_->size(), 2) {
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
    if (sigma < 0.0) throw DomainError("noise strength must be non-negative");
    const CyclicBandOperator d3 = d3_operator(*grid_);
    explicit_op_ = d3.shifted_identity(-0.5 * dt);
    implicit_ = std::make_shared<const CyclicBandedSolver>(d3.shifted_identity(0.5 * dt));
}

void DirectScheme::init_step(DirectState& s, const NoiseIncrement& inc) const {
    if (s.step_index != 0) throw DomainError("init_step requires step index 0");
    const SpatialGrid& g = *grid_;
    Vec d1u, d3u;
    g.d1(s.u, d1u);
    g.d3(s.u, d3u);
    Vec next(s.u.size());
    for (std::size_t n = 0; n < s.u.size(); ++n)
        next[n] = s.u[n] - dt_ * (d3u[n] + 2.0 * s.u[n] * d1u[n]);
    add_noise(next, s.u, sigma_, inc);
    s.u_prev = std::move(s.u);
    s.u = std::move(next);
    s.step_index = 1;
    s.t += dt_;
    check_finite(s.u, s.step_index, s.t);
}

void DirectScheme::step(DirectState& s, const NoiseIncrement& inc) const {
    if (s.step_index < 1) throw DomainError("step requires a completed init_step");
    const SpatialGrid& g = *grid_;
    Vec rhs, d1u, d1p;
    explicit_op_.apply(s.u, rhs);
    g.d1(s.u, d1u);
    g.d1(s.u_prev, d1p);
    for (std::size_t n = 0; n < rhs.size(); ++n)
        rhs[n] += -3.0 * dt_ * s.u[n] * d1u[n] + dt_ * s.u_prev[n] * d1p[n];
    add_noise(rhs, s.u, sigma_, inc);
    implicit_->solve(rhs);
    s.u_prev = std::move(s.u);
    s.u = std::move(rhs);
    ++s.step_index;
    s.t += dt_;
    check_finite(s.u, s.step_index, s.t);
}

void DirectScheme::advance(DirectState& s, const NoiseIncrement& inc) const {
    if (s.step_index == 0) init_step(s, inc);
    else step(s, inc);
}

SeriesRecord run_path(const SchemeConfig& cfg, std::shared_ptr<const SpatialGrid> grid, const Vec& u0,
                      const std::vector<DirectObserver>& observers, int stride) {
    if (stride < 1) throw DomainError("record stride must be >= 1");
    if (cfg.t_end < 0.0) throw DomainError("t_end must be non-negative");
    DirectScheme scheme(grid, cfg.dt, cfg.sigma);
    NoiseSource noise(cfg.noise, *grid);
    DirectState s = make_direct_state(u0);
    SeriesRecord rec;
    auto record = [&] {
        rec.t.push_back(s.t);
        for (const auto& obs : observers) obs(s, rec);
    };
    record();
    const long steps = std::lround(cfg.t_end / cfg.dt);
    for (long j = 0; j < steps; ++j) {
        scheme.advance(s, noise.sample(cfg.dt));
        s.t = (j + 1) * cfg.dt;
        if ((j + 1) % stride == 0) record();
    }
    return rec;
}

DirectObserver energy_observer(const SpatialGrid& grid) {
    return [&grid](const DirectState& s, SeriesRecord& rec) {
        const double e = grid.norm2(s.u);
        rec.push("energy", e);
        rec.push("l2norm", std::sqrt(e));
    };
}

}  // namespace skdv
