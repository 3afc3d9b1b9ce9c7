#include "skdv/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "skdv/errors.hpp"
#include "skdv/phase_fit.hpp"

namespace skdv {

namespace {

constexpr long kBlockSize = 16;

NoiseKind noise_kind(Example ex) { return ex == Example::Scalar ? NoiseKind::Scalar : NoiseKind::WhiteSpaceTime; }

void push_approx(SeriesRecord& rec, const ApproxState& a, double c_star, bool omega2) {
    for (int k = 0; k < 3; ++k) {
        rec.push("alpha" + std::to_string(k), a.alpha(k));
        rec.push("c" + std::to_string(k), a.c(k, c_star));
    }
    rec.push("Omega0", a.omega0);
    if (omega2) rec.push("Omega2", a.omega2);
}

}  // namespace

std::shared_ptr<const SpatialGrid> make_grid(const RunConfig& cfg) {
    return std::make_shared<const SpatialGrid>(cfg.L, cfg.N, cfg.boundary);
}

std::shared_ptr<const SolitonContext> make_context(const RunConfig& cfg) {
    return std::make_shared<const SolitonContext>(make_grid(cfg), cfg.c_star, cfg.weight_a, cfg.window);
}

NoiseSpec path_noise(const RunConfig& cfg, long path_index) {
    NoiseSpec spec;
    spec.kind = noise_kind(cfg.example);
    spec.seed = cfg.seed;
    spec.stream_id = std::uint64_t(path_index);
    return spec;
}

SeriesRecord simulate_frozen_path(const RunConfig& cfg, std::shared_ptr<const SolitonContext> ctx, long path_index) {
    const SolitonContext& c = *ctx;
    FrozenScheme scheme(ctx, {cfg.dt, cfg.sigma, cfg.example});
    std::unique_ptr<ApproxIntegrator> approx;
    if (cfg.approximations) approx = std::make_unique<ApproxIntegrator>(ctx, ApproxConfig{cfg.dt, cfg.sigma, cfg.example, cfg.omega2});
    NoiseSource noise(path_noise(cfg, path_index), c.grid());
    ModulationState s = make_modulation_state(c);
    double omega = 0.0, sup_v = 0.0, sup_ev = 0.0, sup_ec = 0.0;
    double err_v = 0.0, err_c = 0.0;
    SeriesRecord rec;

    auto measure = [&] {
        const double nv = c.norm_a(s.v);
        sup_v = std::max(sup_v, nv);
        if (approx) {
            const Vec v1 = approx->v1();
            Vec d(s.v.size());
            for (std::size_t n = 0; n < d.size(); ++n) d[n] = s.v[n] - v1[n];
            err_v = c.norm_a(d);
            err_c = std::abs(velocity(s, cfg.c_star) - approx->state().c(2, cfg.c_star));
            sup_ev = std::max(sup_ev, err_v);
            sup_ec = std::max(sup_ec, err_c);
        }
        return nv;
    };
    auto record = [&](double nv) {
        rec.t.push_back(s.t);
        rec.push("alpha", s.alpha);
        rec.push("xi", s.xi);
        rec.push("c", velocity(s, cfg.c_star));
        rec.push("Omega", omega);
        rec.push("v_norm_a", nv);
        rec.push("sup_v_norm_a", sup_v);
        if (approx) {
            push_approx(rec, approx->state(), cfg.c_star, cfg.omega2);
            rec.push("err_v1", err_v);
            rec.push("sup_err_v1", sup_ev);
            rec.push("err_c2", err_c);
            rec.push("sup_err_c2", sup_ec);
        }
    };

    record(measure());
    const long steps = std::lround(cfg.t_end / cfg.dt);
    for (long j = 0; j < steps; ++j) {
        const NoiseIncrement inc = noise.sample(cfg.dt);
        const double xi0 = s.xi, speed = velocity(s, cfg.c_star);
        scheme.step(s, inc);
        if (approx) approx->step(inc);
        s.t = (j + 1) * cfg.dt;
        omega += (s.xi - xi0) - speed * cfg.dt;
        const double nv = measure();
        if ((j + 1) % cfg.record_stride == 0) record(nv);
    }
    return rec;
}

SeriesRecord simulate_approx_path(const RunConfig& cfg, std::shared_ptr<const SolitonContext> ctx, long path_index) {
    ApproxIntegrator approx(ctx, {cfg.dt, cfg.sigma, cfg.example, cfg.omega2});
    NoiseSource noise(path_noise(cfg, path_index), ctx->grid());
    SeriesRecord rec;
    rec.t.push_back(0.0);
    push_approx(rec, approx.state(), cfg.c_star, cfg.omega2);
    const long steps = std::lround(cfg.t_end / cfg.dt);
    for (long j = 0; j < steps; ++j) {
        approx.step(noise.sample(cfg.dt));
        if ((j + 1) % cfg.record_stride == 0) {
            rec.t.push_back((j + 1) * cfg.dt);
            push_approx(rec, approx.state(), cfg.c_star, cfg.omega2);
        }
    }
    return rec;
}

SeriesRecord simulate_direct_path(const RunConfig& cfg, std::shared_ptr<const SpatialGrid> grid, long path_index) {
    SchemeConfig sc;
    sc.dt = cfg.dt;
    sc.t_end = cfg.t_end;
    sc.sigma = cfg.sigma;
    sc.noise = path_noise(cfg, path_index);
    std::vector<DirectObserver> obs{energy_observer(*grid)};
    if (cfg.phase_fit) obs.push_back(fit_observer(*grid, cfg.c_star));
    return run_path(sc, grid, sample(*grid, soliton_profile, cfg.c_star), obs, cfg.record_stride);
}

std::size_t EnsembleSummary::time_index(double t) const {
    if (times.empty()) throw DomainError("summary has no recorded times");
    std::size_t best = 0;
    for (std::size_t i = 1; i < times.size(); ++i)
        if (std::abs(times[i] - t) < std::abs(times[best] - t)) best = i;
    return best;
}

EnsembleSummary run_paths(long paths, int threads, const PathFunction& fn, const PathSink& sink) {
    if (paths < 1) throw DomainError("paths must be >= 1");
    const auto start = std::chrono::steady_clock::now();
    const long blocks = (paths + kBlockSize - 1) / kBlockSize;
    struct Block {
        std::vector<double> times;
        std::map<std::string, std::vector<RunningStats>> obs;
        std::vector<Exclusion> excluded;
    };
    std::vector<Block> result(blocks);
    std::atomic<long> next{0};
    std::mutex sink_mutex;
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const long b = next.fetch_add(1);
            if (b >= blocks) return;
            Block& blk = result[b];
            const long hi = std::min(paths, (b + 1) * kBlockSize);
            for (long p = b * kBlockSize; p < hi; ++p) {
                SeriesRecord rec;
                try {
                    rec = fn(p);
                } catch (const BlowUp& e) {
                    blk.excluded.push_back({p, std::string("blow-up: ") + e.what()});
                    continue;
                } catch (const FrameCollapse& e) {
                    blk.excluded.push_back({p, std::string("frame collapse: ") + e.what()});
                    continue;
                } catch (const SingularProjection& e) {
                    blk.excluded.push_back({p, std::string("singular projection: ") + e.what()});
                    continue;
                } catch (const NoConvergence& e) {
                    blk.excluded.push_back({p, std::string("no convergence: ") + e.what()});
                    continue;
                } catch (...) {
                    std::lock_guard<std::mutex> lk(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = blocks;
                    return;
                }
                if (blk.times.empty()) blk.times = rec.t;
                for (const auto& [name, col] : rec.columns) {
                    auto& acc = blk.obs[name];
                    if (acc.size() < col.size()) acc.resize(col.size());
                    for (std::size_t i = 0; i < col.size(); ++i) acc[i].add(col[i]);
                }
                if (sink) {
                    std::lock_guard<std::mutex> lk(sink_mutex);
                    sink(p, rec);
                }
            }
        }
    };

    int nt = threads > 0 ? threads : int(std::max(1u, std::thread::hardware_concurrency()));
    nt = int(std::min<long>(nt, blocks));
    if (nt <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    EnsembleSummary out;
    out.paths = paths;
    for (Block& blk : result) {
        if (out.times.empty()) out.times = blk.times;
        for (auto& [name, acc] : blk.obs) {
            auto& dst = out.observables[name];
            if (dst.size() < acc.size()) dst.resize(acc.size());
            for (std::size_t i = 0; i < acc.size(); ++i) dst[i].merge(acc[i]);
        }
        out.excluded.insert(out.excluded.end(), blk.excluded.begin(), blk.excluded.end());
    }
    out.aborted = double(out.excluded.size()) > 0.01 * double(paths);
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

EnsembleSummary run_ensemble(const RunConfig& cfg, const PathSink& sink) {
    validate(cfg);
    if (cfg.engine == Engine::Direct) {
        const auto grid = make_grid(cfg);
        return run_paths(cfg.paths, cfg.threads, [&](long p) { return simulate_direct_path(cfg, grid, p); }, sink);
    }
    const auto ctx = make_context(cfg);
    return run_paths(cfg.paths, cfg.threads, [&](long p) { return simulate_frozen_path(cfg, ctx, p); }, sink);
}

void write_series_csv(const std::string& path, const SeriesRecord& rec) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(17);
    out << "t";
    for (const auto& [name, col] : rec.columns) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < rec.t.size(); ++i) {
        out << rec.t[i];
        for (const auto& [name, col] : rec.columns) out << ',' << (i < col.size() ? col[i] : NAN);
        out << '\n';
    }
}

void write_summary_csv(const std::string& path, const EnsembleSummary& s) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(17);
    out << "t,observable,mean,var,se,n\n";
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        for (const auto& [name, acc] : s.observables) {
            if (i >= acc.size()) continue;
            const RunningStats& r = acc[i];
            out << s.times[i] << ',' << name << ',' << r.mean << ',' << r.variance() << ',' << r.se() << ',' << r.n
                << '\n';
        }
    }
}

void write_theory_csv(const std::string& path, const RunConfig& cfg, const std::vector<double>& times) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(17);
    out << "t,statistic,value\n";
    const ConstantsTable k = ConstantsTable::reference(cfg.c_star);
    for (double t : times) {
        const TheoryStats th = theoretical_stats(cfg.example, cfg.sigma, k, t);
        out << t << ",mean_alpha0," << th.mean_alpha0 << '\n';
        out << t << ",mean_c0," << th.mean_c0 << '\n';
        out << t << ",var_c0," << th.var_c0 << '\n';
        out << t << ",mean_Omega0," << th.mean_omega0 << '\n';
        out << t << ",var_Omega0," << th.var_omega0 << '\n';
    }
}

void write_manifest(const std::string& path, const RunConfig& cfg, const EnsembleSummary* s) {
    nlohmann::ordered_json j;
    j["build_id"] = build_id();
    j["config"] = {{"mode", to_string(cfg.mode)},
                   {"engine", to_string(cfg.engine)},
                   {"example", to_string(cfg.example)},
                   {"sigma", cfg.sigma},
                   {"cstar", cfg.c_star},
                   {"domain_halfwidth", cfg.L},
                   {"cells", cfg.N},
                   {"dt", cfg.dt},
                   {"t_end", cfg.t_end},
                   {"paths", cfg.paths},
                   {"seed", cfg.seed},
                   {"stride", cfg.record_stride},
                   {"window", {cfg.window.lo, cfg.window.hi}},
                   {"weight_a", cfg.weight_a},
                   {"boundary", to_string(cfg.boundary)},
                   {"approximations", cfg.approximations},
                   {"omega2", cfg.omega2},
                   {"phase_fit", cfg.phase_fit},
                   {"sigmas", cfg.sigmas}};
    j["explicit_diffusion_number"] = explicit_diffusion_number(cfg);
    j["rng"] = {{"algorithm", "philox4x32-10 + box-muller"}, {"seed", cfg.seed}, {"stream_id", "path index"}};
    if (s) {
        j["paths_completed"] = s->paths - long(s->excluded.size());
        nlohmann::ordered_json ex = nlohmann::ordered_json::array();
        for (const auto& e : s->excluded) ex.push_back({{"path", e.path}, {"reason", e.reason}});
        j["excluded"] = ex;
        j["aborted"] = s->aborted;
        j["wall_seconds"] = s->wall_seconds;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

EnsembleSummary run_and_write(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    validate(cfg);
    fs::create_directories(cfg.output_dir);
    PathSink sink;
    if (cfg.write_paths) {
        fs::create_directories(fs::path(cfg.output_dir) / "paths");
        sink = [&](long p, const SeriesRecord& rec) {
            char name[32];
            std::snprintf(name, sizeof name, "%03ld.csv", p);
            write_series_csv((fs::path(cfg.output_dir) / "paths" / name).string(), rec);
        };
    }
    EnsembleSummary s = run_ensemble(cfg, sink);
    write_summary_csv((fs::path(cfg.output_dir) / "summary.csv").string(), s);
    write_theory_csv((fs::path(cfg.output_dir) / "theory.csv").string(), cfg, s.times);
    write_manifest((fs::path(cfg.output_dir) / "manifest.json").string(), cfg, &s);
    return s;
}

}  // namespace skdv
