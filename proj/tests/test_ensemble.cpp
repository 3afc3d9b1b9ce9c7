#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "skdv/ensemble.hpp"
#include "skdv/errors.hpp"

using namespace skdv;
namespace fs = std::filesystem;

namespace {

RunConfig small_run() {
    RunConfig cfg;
    cfg.L = 30.0;
    cfg.N = 200;
    cfg.window = {-30.0, 12.0};
    cfg.dt = 1e-3;
    cfg.t_end = 0.05;
    cfg.record_stride = 10;
    cfg.paths = 5;
    cfg.sigma = 0.1;
    cfg.threads = 1;
    return cfg;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("skdv-test-" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_SUITE("ensemble-lab") {

TEST_CASE("streaming statistics agree with two-pass formulas") {
    std::mt19937_64 rng(1);
    std::lognormal_distribution<double> d(3.0, 0.7);
    std::vector<double> x(10000);
    for (double& v : x) v = d(rng);
    RunningStats s, a, b;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s.add(x[i]);
        (i < 3700 ? a : b).add(x[i]);
    }
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= double(x.size());
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= double(x.size() - 1);
    CHECK(std::abs(s.mean / mean - 1.0) < 1e-10);
    CHECK(std::abs(s.variance() / var - 1.0) < 1e-10);
    CHECK(s.se() == doctest::Approx(std::sqrt(var / 1e4)).epsilon(1e-10));
    a.merge(b);
    CHECK(a.n == s.n);
    CHECK(std::abs(a.mean / mean - 1.0) < 1e-10);
    CHECK(std::abs(a.variance() / var - 1.0) < 1e-10);
    RunningStats one;
    one.add(2.0);
    CHECK(one.variance() == 0.0);
}

TEST_CASE("order fit on exact and noisy power laws") {
    const std::vector<double> sig{0.05, 0.075, 0.1, 0.125};
    std::vector<std::pair<double, double>> exact;
    for (double s : sig) exact.emplace_back(s, 2.0 * s * s * s);
    const OrderFit f = fit_order(exact);
    CHECK(std::abs(f.beta - 3.0) < 1e-12);
    CHECK(std::abs(f.k - 2.0) < 1e-12);
    CHECK(f.residual < 1e-12);

    std::mt19937_64 rng(4);
    std::normal_distribution<double> noise(0.0, 0.05);
    RunningStats betas;
    for (int rep = 0; rep < 400; ++rep) {
        std::vector<std::pair<double, double>> e;
        for (double s : sig) e.emplace_back(s, 2.0 * s * s * s * (1.0 + noise(rng)));
        betas.add(fit_order(e).beta);
    }
    // 5% multiplicative noise on four points spread over log σ gives a slope spread near 0.07
    CHECK(std::abs(betas.mean - 3.0) < 3.0 * betas.se());
    CHECK(std::sqrt(betas.variance()) < 0.1);
    CHECK_THROWS_AS(fit_order({{0.1, 1.0}, {0.2, 0.0}, {0.3, 1.0}}), DomainError);
    CHECK_THROWS_AS(fit_order({{0.1, 1.0}, {0.2, 2.0}}), DomainError);
}

TEST_CASE("logarithmic growth fit") {
    const std::vector<double> t{2.0, 5.0, 10.0};
    std::vector<double> y;
    for (double s : t) y.push_back(0.1 + 0.04 * std::log(s));
    const LogFit f = fit_log_growth(t, y);
    CHECK(f.a == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(f.b == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(f.max_rel_residual < 1e-12);
}

TEST_CASE("configuration validation and parsing") {
    RunConfig cfg = small_run();
    CHECK_NOTHROW(validate(cfg));
    cfg.paths = 0;
    CHECK_THROWS_AS(validate(cfg), DomainError);
    cfg = small_run();
    cfg.weight_a = 2.0;
    CHECK_THROWS_AS(validate(cfg), DomainError);
    cfg = small_run();
    cfg.window = {-40.0, 0.0};
    CHECK_THROWS_AS(validate(cfg), DomainError);
    cfg = small_run();
    cfg.mode = Mode::FitOrder;
    cfg.sigmas = {0.1, 0.2};
    CHECK_THROWS_AS(validate(cfg), DomainError);

    CHECK(parse_example("white") == Example::White);
    CHECK(parse_engine("direct") == Engine::Direct);
    CHECK(parse_boundary("periodic") == Boundary::Periodic);
    CHECK(parse_mode("fit-order") == Mode::FitOrder);
    CHECK_THROWS_AS(parse_example("colored"), DomainError);
    const NormWindow w = parse_window("-50,20");
    CHECK(w.lo == -50.0);
    CHECK(w.hi == 20.0);
    CHECK_THROWS_AS(parse_window("3,1"), DomainError);
}

TEST_CASE("explicit diffusion number") {
    RunConfig cfg = small_run();
    cfg.sigma = 0.2;
    const double dx = 2.0 * cfg.L / cfg.N;
    CHECK(explicit_diffusion_number(cfg) ==
          doctest::Approx(0.5 * 0.04 * (4.0 / 9.0) * cfg.L * cfg.L * cfg.dt / (dx * dx)));
    cfg.example = Example::White;
    CHECK(explicit_diffusion_number(cfg) ==
          doctest::Approx(0.5 * 0.04 * (4.0 / 35.0) * std::sqrt(3.0) * cfg.L * cfg.L * cfg.dt / (dx * dx)));
}

TEST_CASE("a single noiseless path is its own summary") {
    RunConfig cfg = small_run();
    cfg.sigma = 0.0;
    cfg.paths = 1;
    const EnsembleSummary s = run_ensemble(cfg);
    const SeriesRecord r = simulate_frozen_path(cfg, make_context(cfg), 0);
    CHECK(s.times == r.t);
    for (const auto& [name, col] : r.columns)
        for (std::size_t i = 0; i < col.size(); ++i) {
            CHECK(s.at(name, i).mean == col[i]);
            CHECK(s.at(name, i).variance() == 0.0);
        }
    CHECK(s.at("c", s.times.size() - 1).mean == 3.0);
}

TEST_CASE("summaries are reproducible and independent of the thread count") {
    RunConfig cfg = small_run();
    cfg.paths = 40;
    cfg.approximations = false;
    const fs::path a = scratch("a"), b = scratch("b");
    cfg.output_dir = a.string();
    run_and_write(cfg);
    cfg.output_dir = b.string();
    cfg.threads = 3;
    run_and_write(cfg);
    CHECK(slurp(a / "summary.csv") == slurp(b / "summary.csv"));
    CHECK(slurp(a / "theory.csv") == slurp(b / "theory.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("output artifacts follow the CSV and manifest contracts") {
    RunConfig cfg = small_run();
    cfg.write_paths = true;
    cfg.paths = 3;
    const fs::path dir = scratch("artifacts");
    cfg.output_dir = dir.string();
    const EnsembleSummary s = run_and_write(cfg);

    std::ifstream summary(dir / "summary.csv");
    std::string line;
    std::getline(summary, line);
    CHECK(line == "t,observable,mean,var,se,n");
    long rows = 0;
    while (std::getline(summary, line)) {
        ++rows;
        std::stringstream ss(line);
        std::string t, name, mean, var, se, n;
        std::getline(ss, t, ',');
        std::getline(ss, name, ',');
        std::getline(ss, mean, ',');
        std::getline(ss, var, ',');
        std::getline(ss, se, ',');
        std::getline(ss, n, ',');
        CHECK(std::stod(var) >= 0.0);
        CHECK(std::stod(se) == doctest::Approx(std::sqrt(std::stod(var) / std::stod(n))));
        CHECK(std::stol(n) == 3);
    }
    CHECK(rows == long(s.times.size() * s.observables.size()));

    std::ifstream theory(dir / "theory.csv");
    std::getline(theory, line);
    CHECK(line == "t,statistic,value");

    std::ifstream path(dir / "paths" / "002.csv");
    std::getline(path, line);
    CHECK(line.rfind("t,", 0) == 0);
    CHECK(line.find(",c,") != std::string::npos);
    CHECK(line.find("sup_err_c2") != std::string::npos);

    const auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(j.at("config").at("seed") == cfg.seed);
    CHECK(j.at("config").at("paths") == 3);
    CHECK(j.at("config").at("boundary") == "truncated");
    CHECK(j.at("excluded").is_array());
    CHECK(j.at("paths_completed") == 3);
    CHECK(j.contains("build_id"));
    CHECK(j.contains("wall_seconds"));
    fs::remove_all(dir);
}

TEST_CASE("collapsing paths are excluded and abort the ensemble") {
    RunConfig cfg = small_run();
    cfg.sigma = 2.0;
    cfg.t_end = 0.5;
    cfg.paths = 4;
    cfg.approximations = false;
    const EnsembleSummary s = run_ensemble(cfg);
    CHECK(!s.excluded.empty());
    CHECK(s.aborted);
}

TEST_CASE("direct engine with phase fitting") {
    RunConfig cfg = small_run();
    cfg.engine = Engine::Direct;
    cfg.N = 600;
    cfg.dt = 1e-4;
    cfg.t_end = 0.02;
    cfg.record_stride = 20;
    cfg.phase_fit = true;
    cfg.paths = 2;
    const EnsembleSummary s = run_ensemble(cfg);
    CHECK(s.excluded.empty());
    for (const char* col : {"energy", "l2norm", "c_fit", "xi_fit", "Omega_fit", "residual", "iterations"})
        CHECK(s.observables.count(col) == 1);
    CHECK(s.at("c_fit", 0).mean == doctest::Approx(3.0).epsilon(1e-6));
}

}
