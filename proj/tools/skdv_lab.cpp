#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <tuple>

#include <CLI11.hpp>

#include "skdv/ensemble.hpp"
#include "skdv/errors.hpp"

using namespace skdv;

namespace {

struct Flags {
    std::string example = "scalar";
    std::string engine = "frozen";
    std::string boundary = "truncated";
    std::vector<std::string> window;
    std::vector<double> sigmas;
};

void add_common(CLI::App* app, RunConfig& cfg, Flags& f) {
    app->add_option("--example", f.example, "scalar|white")->check(CLI::IsMember({"scalar", "white"}));
    app->add_option("--sigma", cfg.sigma, "noise strength");
    app->add_option("--cstar", cfg.c_star, "reference amplitude c*");
    app->add_option("--domain-halfwidth", cfg.L, "half-width L of [-L, L]");
    app->add_option("--cells", cfg.N, "cell count N");
    app->add_option("--dt", cfg.dt, "time step");
    app->add_option("--t-end", cfg.t_end, "horizon");
    app->add_option("--paths", cfg.paths, "ensemble size");
    app->add_option("--seed", cfg.seed, "RNG seed");
    app->add_option("--stride", cfg.record_stride, "record every STRIDE steps");
    app->add_option("--weight-a", cfg.weight_a, "weight exponent a of the L2_a norm");
    app->add_option("--window", f.window, "norm window LO,HI")->delimiter(',')->expected(2);
    app->add_option("--boundary", f.boundary, "periodic|truncated difference stencils")
        ->check(CLI::IsMember({"periodic", "truncated"}));
    app->add_option("--out", cfg.output_dir, "output directory");
    app->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
    app->add_option("--engine", f.engine, "direct|frozen (ensemble)")->check(CLI::IsMember({"direct", "frozen"}));
    app->add_flag("--write-paths", cfg.write_paths, "write paths/NNN.csv");
    app->add_flag("!--no-approx", cfg.approximations, "skip the approximation hierarchy");
    app->add_flag("--omega2", cfg.omega2, "integrate the second-order phase shift");
    app->add_flag("--phase-fit", cfg.phase_fit, "fit (c, xi) along direct paths");
    app->add_option("--sigmas", f.sigmas, "noise levels for fit-order")->delimiter(',');
}

void finish(RunConfig& cfg, const Flags& f, Mode mode) {
    cfg.mode = mode;
    cfg.example = parse_example(f.example);
    cfg.engine = parse_engine(f.engine);
    cfg.boundary = parse_boundary(f.boundary);
    if (!f.window.empty()) cfg.window = parse_window(f.window.at(0) + "," + f.window.at(1));
    cfg.sigmas = f.sigmas;
    if (mode == Mode::Direct) cfg.engine = Engine::Direct;
    if (mode == Mode::Frozen || mode == Mode::FitOrder) cfg.engine = Engine::Frozen;
    validate(cfg);
    RunConfig probe = cfg;
    for (double s : cfg.sigmas) probe.sigma = std::max(probe.sigma, s);
    const double nu = explicit_diffusion_number(probe);
    if (cfg.engine == Engine::Frozen && nu > 0.5)
        std::cerr << "warning: explicit diffusion number " << nu << " > 0.5; frozen-frame paths may collapse\n";
}

int single_path(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    SeriesRecord rec;
    if (cfg.mode == Mode::Direct) rec = simulate_direct_path(cfg, make_grid(cfg), 0);
    else if (cfg.mode == Mode::Frozen) rec = simulate_frozen_path(cfg, make_context(cfg), 0);
    else rec = simulate_approx_path(cfg, make_context(cfg), 0);
    const auto out = fs::path(cfg.output_dir) / "series.csv";
    write_series_csv(out.string(), rec);
    write_manifest((fs::path(cfg.output_dir) / "manifest.json").string(), cfg, nullptr);
    std::cout << "wrote " << out.string() << '\n';
    return 0;
}

int fit_order_mode(const RunConfig& base) {
    namespace fs = std::filesystem;
    fs::create_directories(base.output_dir);
    std::vector<std::pair<double, double>> ec, ev;
    for (double s : base.sigmas) {
        RunConfig cfg = base;
        cfg.mode = Mode::Ensemble;
        cfg.sigma = s;
        cfg.approximations = true;
        char dir[64];
        std::snprintf(dir, sizeof dir, "sigma_%g", s);
        cfg.output_dir = (fs::path(base.output_dir) / dir).string();
        const EnsembleSummary sum = run_and_write(cfg);
        if (sum.aborted) {
            std::cerr << "ensemble at sigma=" << s << " exceeded the exclusion cap\n";
            return 2;
        }
        const std::size_t last = sum.times.size() - 1;
        ec.emplace_back(s, sum.at("sup_err_c2", last).mean);
        ev.emplace_back(s, sum.at("sup_err_v1", last).mean);
    }
    const OrderFit fc = fit_order(ec), fv = fit_order(ev);
    const auto out = fs::path(base.output_dir) / "fit_order.csv";
    std::FILE* f = std::fopen(out.string().c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + out.string());
    std::fprintf(f, "observable,beta,k,residual\n");
    std::fprintf(f, "sup_err_c2,%.10g,%.10g,%.10g\n", fc.beta, fc.k, fc.residual);
    std::fprintf(f, "sup_err_v1,%.10g,%.10g,%.10g\n", fv.beta, fv.k, fv.residual);
    std::fclose(f);
    std::printf("sup|c-c2|: beta=%.4f k=%.4g\nsup|v-v1|_a: beta=%.4f k=%.4g\n", fc.beta, fc.k, fv.beta, fv.k);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic KdV soliton laboratory"};
    app.require_subcommand(1);

    RunConfig cfg;
    Flags flags;
    const std::tuple<const char*, const char*, Mode> subs[] = {
        {"direct", "one original-frame path", Mode::Direct},
        {"frozen", "one frozen-frame path with the approximation hierarchy", Mode::Frozen},
        {"approx", "one path of the approximation hierarchy alone", Mode::Approx},
        {"ensemble", "ensemble statistics, theory curves and manifest", Mode::Ensemble},
        {"fit-order", "remainder orders over --sigmas", Mode::FitOrder}};
    std::vector<std::pair<CLI::App*, Mode>> apps;
    app.set_config("--config", "", "key=value configuration file");
    add_common(&app, cfg, flags);
    for (const auto& [name, help, mode] : subs) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->fallthrough();
        apps.emplace_back(sub, mode);
    }
    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto& [sub, mode] : apps) {
            if (!sub->parsed()) continue;
            finish(cfg, flags, mode);
            if (mode == Mode::Ensemble) {
                const EnsembleSummary s = run_and_write(cfg);
                std::cout << "paths " << s.paths << ", excluded " << s.excluded.size() << ", " << s.wall_seconds
                          << " s\n";
                return s.aborted ? 2 : 0;
            }
            if (mode == Mode::FitOrder) return fit_order_mode(cfg);
            return single_path(cfg);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
