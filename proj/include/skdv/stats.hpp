#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace skdv {

// Single-pass mean and M2 (Welford), mergeable (Chan et al.).
struct RunningStats {
    long n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x);
    void merge(const RunningStats& o);
    // Unbiased sample variance; zero for n < 2.
    double variance() const { return n > 1 ? m2 / double(n - 1) : 0.0; }
    // √(variance/n)
    double se() const;
};

struct OrderFit {
    double beta = 0.0;
    double k = 0.0;
    double residual = 0.0;  // RMS of the log-residuals
};

// Least squares of log e = log k + β log σ. Needs ≥ 3 points, all positive.
OrderFit fit_order(const std::vector<std::pair<double, double>>& sigma_error);

// Least squares of y = a + b·log t; returns (a, b, max |residual|/|y|).
struct LogFit {
    double a = 0.0, b = 0.0, max_rel_residual = 0.0;
};
LogFit fit_log_growth(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace skdv
