#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// Composite Simpson on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

inline double sech2(double z) {
    const double c = std::cosh(z);
    return 1.0 / (c * c);
}

// Least-squares slope of log y against log x.
inline double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace oracle
