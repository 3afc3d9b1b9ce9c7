#pragma once

#include <stdexcept>
#include <string>

namespace skdv {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Raised when |det K(v)| drops below the configured fraction of |det K(0)|.
struct SingularProjection : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BlowUp : std::runtime_error {
    BlowUp(const std::string& what, long step, double t)
        : std::runtime_error(what), step(step), t(t) {}
    long step;
    double t;
};

struct FrameCollapse : std::runtime_error {
    FrameCollapse(const std::string& what, long step, double t)
        : std::runtime_error(what), step(step), t(t) {}
    long step;
    double t;
};

struct NoConvergence : std::runtime_error {
    NoConvergence(const std::string& what, double residual)
        : std::runtime_error(what), residual(residual) {}
    double residual;
};

}  // namespace skdv
