#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "skdv/approximations.hpp"
#include "skdv/direct.hpp"
#include "skdv/stats.hpp"

namespace skdv {

enum class Mode { Direct, Frozen, Approx, Ensemble, FitOrder };
enum class Engine { Direct, Frozen };

struct RunConfig {
    Mode mode = Mode::Ensemble;
    Engine engine = Engine::Frozen;
    Example example = Example::Scalar;
    double sigma = 0.1;
    double c_star = 3.0;
    double L = 50.0;
    int N = 500;
    double dt = 1e-3;
    double t_end = 2.0;
    long paths = 100;
    std::uint64_t seed = 1;
    int record_stride = 100;
    NormWindow window{-50.0, 20.0};
    double weight_a = 0.5;
    Boundary boundary = Boundary::Truncated;
    std::string output_dir = "skdv-out";
    int threads = 0;            // 0: hardware concurrency
    bool write_paths = false;
    bool approximations = true; // frozen engine: integrate the α_k/Ω_k hierarchy alongside
    bool omega2 = false;
    bool phase_fit = false;     // direct engine: fit (c, ξ) at every record
    std::vector<double> sigmas; // fit-order
};

// Throws DomainError on an invalid configuration.
void validate(const RunConfig& cfg);
// Explicit-diffusion number ½σ²‖γ̄(0)‖²L²Δt/Δx² of the frozen-frame drift at
// |x| = L (γ̄_{s;I}(0)² for I, ‖γ̄_⋄(0)‖² for III). Frozen runs lose
// stability above roughly 1/2.
double explicit_diffusion_number(const RunConfig& cfg);
std::string to_string(Mode m);
std::string to_string(Engine e);
std::string to_string(Example e);
std::string to_string(Boundary b);
Mode parse_mode(const std::string& s);
Engine parse_engine(const std::string& s);
Example parse_example(const std::string& s);
Boundary parse_boundary(const std::string& s);
NormWindow parse_window(const std::string& s);

std::shared_ptr<const SpatialGrid> make_grid(const RunConfig& cfg);
std::shared_ptr<const SolitonContext> make_context(const RunConfig& cfg);
NoiseSpec path_noise(const RunConfig& cfg, long path_index);

// Frozen-frame path, optionally with the approximation hierarchy on the
// same increments. Columns: alpha, xi, c, Omega, v_norm_a, sup_v_norm_a and,
// with approximations, alpha0..2, c0..c2, Omega0, err_v1, sup_err_v1,
// err_c2, sup_err_c2 (Omega2 with omega2).
SeriesRecord simulate_frozen_path(const RunConfig& cfg, std::shared_ptr<const SolitonContext> ctx, long path_index);
// Approximation hierarchy alone. Columns: alpha0..2, c0..c2, Omega0 (Omega2).
SeriesRecord simulate_approx_path(const RunConfig& cfg, std::shared_ptr<const SolitonContext> ctx, long path_index);
// Original-frame path started from φ_{c*}. Columns: energy, l2norm and,
// with phase_fit, c_fit, xi_fit, Omega_fit, residual, iterations.
SeriesRecord simulate_direct_path(const RunConfig& cfg, std::shared_ptr<const SpatialGrid> grid, long path_index);

struct Exclusion {
    long path = 0;
    std::string reason;
};

struct EnsembleSummary {
    std::vector<double> times;
    std::map<std::string, std::vector<RunningStats>> observables;
    long paths = 0;
    std::vector<Exclusion> excluded;
    bool aborted = false;  // exclusions above 1% of paths
    double wall_seconds = 0.0;

    const RunningStats& at(const std::string& name, std::size_t time_index) const {
        return observables.at(name).at(time_index);
    }
    std::size_t time_index(double t) const;  // nearest recorded time
};

using PathFunction = std::function<SeriesRecord(long path_index)>;
using PathSink = std::function<void(long path_index, const SeriesRecord&)>;

// Runs paths [0, paths) over worker threads. Paths are grouped in fixed
// blocks reduced in block order, so results do not depend on the thread count.
EnsembleSummary run_paths(long paths, int threads, const PathFunction& fn, const PathSink& sink = {});
// Dispatches on cfg.engine.
EnsembleSummary run_ensemble(const RunConfig& cfg, const PathSink& sink = {});

// Output files (summary.csv, theory.csv, manifest.json, paths/NNN.csv).
void write_series_csv(const std::string& path, const SeriesRecord& rec);
void write_summary_csv(const std::string& path, const EnsembleSummary& s);
void write_theory_csv(const std::string& path, const RunConfig& cfg, const std::vector<double>& times);
void write_manifest(const std::string& path, const RunConfig& cfg, const EnsembleSummary* s);
// run_ensemble plus all artifacts under cfg.output_dir.
EnsembleSummary run_and_write(const RunConfig& cfg);

std::string build_id();

}  // namespace skdv
