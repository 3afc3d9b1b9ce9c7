#include "skdv/stats.hpp"

#include <algorithm>
#include <cmath>

#include "skdv/errors.hpp"

namespace skdv {

void RunningStats::add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / double(n);
    m2 += d * (x - mean);
}

void RunningStats::merge(const RunningStats& o) {
    if (o.n == 0) return;
    if (n == 0) {
        *this = o;
        return;
    }
    const double nt = double(n + o.n);
    const double d = o.mean - mean;
    mean += d * double(o.n) / nt;
    m2 += o.m2 + d * d * double(n) * double(o.n) / nt;
    n += o.n;
}

double RunningStats::se() const { return n > 0 ? std::sqrt(variance() / double(n)) : 0.0; }

namespace {

// Ordinary least squares y = a + b x.
std::pair<double, double> line_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double m = double(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw DomainError("least squares needs distinct abscissae");
    const double b = sxy / sxx;
    return {my - b * mx, b};
}

}  // namespace

OrderFit fit_order(const std::vector<std::pair<double, double>>& sigma_error) {
    if (sigma_error.size() < 3) throw DomainError("fit_order needs at least three noise levels");
    std::vector<double> x, y;
    for (const auto& [s, e] : sigma_error) {
        if (!(s > 0.0) || !(e > 0.0)) throw DomainError("fit_order needs positive noise levels and errors");
        x.push_back(std::log(s));
        y.push_back(std::log(e));
    }
    const auto [a, b] = line_fit(x, y);
    double r2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) r2 += std::pow(y[i] - a - b * x[i], 2);
    return {b, std::exp(a), std::sqrt(r2 / double(x.size()))};
}

LogFit fit_log_growth(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size() || t.size() < 2) throw DomainError("fit_log_growth needs matching series of length >= 2");
    std::vector<double> x;
    for (double s : t) {
        if (!(s > 0.0)) throw DomainError("fit_log_growth needs positive times");
        x.push_back(std::log(s));
    }
    const auto [a, b] = line_fit(x, y);
    double worst = 0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(y[i] - a - b * x[i]) / std::abs(y[i]));
    return {a, b, worst};
}

}  // namespace skdv
