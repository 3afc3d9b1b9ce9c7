#pragma once

#include <functional>
#include <memory>

#include "skdv/banded.hpp"
#include "skdv/noise.hpp"
#include "skdv/series.hpp"

namespace skdv {

struct DirectState {
    Vec u;
    Vec u_prev;
    double t = 0.0;
    long step_index = 0;
};

struct SchemeConfig {
    double dt = 2.5e-5;
    double t_end = 1.0;
    double sigma = 0.0;
    NoiseSpec noise;
};

DirectState make_direct_state(const Vec& u0);

// Original-frame scheme for du = −(∂³u + 2u∂u)dt + σu dW. The dispersive part is
// Crank–Nicolson, the nonlinearity two-step Adams–Bashforth.
class DirectScheme {
public:
    DirectScheme(std::shared_ptr<const SpatialGrid> grid, double dt, double sigma);

    const SpatialGrid& grid() const { return *grid_; }
    double dt() const { return dt_; }
    double sigma() const { return sigma_; }

    // U¹ = U⁰ − Δt(D₃U⁰ + 2U⁰⊙D₁U⁰) + σU⁰⊙ΔW
    void init_step(DirectState& s, const NoiseIncrement& inc) const;
    // U^{j+1} = (I + Δt/2 D₃)⁻¹[(I − Δt/2 D₃)U^j + σU^j⊙ΔW − 3ΔtU^j⊙D₁U^j + ΔtU^{j−1}⊙D₁U^{j−1}]
    void step(DirectState& s, const NoiseIncrement& inc) const;
    // Dispatches to init_step or step by step index.
    void advance(DirectState& s, const NoiseIncrement& inc) const;

private:
    std::shared_ptr<const SpatialGrid> grid_;
    double dt_, sigma_;
    CyclicBandOperator explicit_op_;  // I − Δt/2 D₃
    std::shared_ptr<const CyclicBandedSolver> implicit_;  // (I + Δt/2 D₃)⁻¹
};

using DirectObserver = std::function<void(const DirectState&, SeriesRecord&)>;

// Integrates from u0 to t_end, sampling observers at t = 0 and every
// `stride` steps. Observers append their columns; the time axis is shared.
SeriesRecord run_path(const SchemeConfig& cfg, std::shared_ptr<const SpatialGrid> grid, const Vec& u0,
                      const std::vector<DirectObserver>& observers, int stride = 1);

// Observer recording ‖u‖²_{L²} ("energy") and ‖u‖_{L²} ("l2norm").
DirectObserver energy_observer(const SpatialGrid& grid);

}  // namespace skdv
