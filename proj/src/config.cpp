#include <cmath>
#include <sstream>

#include "skdv/ensemble.hpp"
#include "skdv/errors.hpp"

#ifndef SKDV_BUILD_ID
#define SKDV_BUILD_ID "unknown"
#endif

namespace skdv {

void validate(const RunConfig& cfg) {
    if (cfg.paths < 1) throw DomainError("paths must be >= 1");
    if (cfg.record_stride < 1) throw DomainError("stride must be >= 1");
    if (!(cfg.sigma >= 0.0)) throw DomainError("sigma must be non-negative");
    if (!(cfg.c_star > 0.0)) throw DomainError("cstar must be positive");
    if (!(cfg.L > 0.0)) throw DomainError("domain half-width must be positive");
    if (cfg.N < 8) throw DomainError("cells must be >= 8");
    if (!(cfg.dt > 0.0)) throw DomainError("dt must be positive");
    if (!(cfg.t_end >= 0.0)) throw DomainError("t-end must be non-negative");
    if (!(cfg.weight_a > 0.0) || !(cfg.weight_a < std::sqrt(cfg.c_star)))
        throw DomainError("weight-a must lie in (0, sqrt(cstar))");
    if (cfg.window.lo > cfg.window.hi || cfg.window.lo < -cfg.L - 1e-9 || cfg.window.hi > cfg.L + 1e-9)
        throw DomainError("window must be an interval inside [-L, L]");
    if (cfg.threads < 0) throw DomainError("threads must be >= 0");
    if (cfg.mode == Mode::FitOrder && cfg.sigmas.size() < 3) throw DomainError("fit-order needs at least three sigmas");
    for (double s : cfg.sigmas)
        if (!(s > 0.0)) throw DomainError("fit-order sigmas must be positive");
}

double explicit_diffusion_number(const RunConfig& cfg) {
    const ConstantsTable k = ConstantsTable::reference(cfg.c_star);
    const double g2 = cfg.example == Example::Scalar ? k.gamma_s_I * k.gamma_s_I : k.gamma_w_norm2;
    const double dx = 2.0 * cfg.L / cfg.N;
    return 0.5 * cfg.sigma * cfg.sigma * g2 * cfg.L * cfg.L * cfg.dt / (dx * dx);
}

std::string to_string(Mode m) {
    switch (m) {
    case Mode::Direct: return "direct";
    case Mode::Frozen: return "frozen";
    case Mode::Approx: return "approx";
    case Mode::Ensemble: return "ensemble";
    case Mode::FitOrder: return "fit-order";
    }
    return "?";
}

std::string to_string(Engine e) { return e == Engine::Direct ? "direct" : "frozen"; }
std::string to_string(Example e) { return e == Example::Scalar ? "scalar" : "white"; }
std::string to_string(Boundary b) { return b == Boundary::Periodic ? "periodic" : "truncated"; }

Mode parse_mode(const std::string& s) {
    if (s == "direct") return Mode::Direct;
    if (s == "frozen") return Mode::Frozen;
    if (s == "approx") return Mode::Approx;
    if (s == "ensemble") return Mode::Ensemble;
    if (s == "fit-order") return Mode::FitOrder;
    throw DomainError("unknown mode: " + s);
}

Engine parse_engine(const std::string& s) {
    if (s == "direct") return Engine::Direct;
    if (s == "frozen") return Engine::Frozen;
    throw DomainError("unknown engine: " + s);
}

Example parse_example(const std::string& s) {
    if (s == "scalar") return Example::Scalar;
    if (s == "white") return Example::White;
    throw DomainError("unknown example: " + s);
}

Boundary parse_boundary(const std::string& s) {
    if (s == "periodic") return Boundary::Periodic;
    if (s == "truncated") return Boundary::Truncated;
    throw DomainError("unknown boundary: " + s);
}

NormWindow parse_window(const std::string& s) {
    std::istringstream in(s);
    NormWindow w{};
    char comma = 0;
    if (!(in >> w.lo >> comma >> w.hi) || comma != ',' || w.lo > w.hi)
        throw DomainError("window must be LO,HI with LO <= HI");
    return w;
}

std::string build_id() { return SKDV_BUILD_ID; }

}  // namespace skdv
