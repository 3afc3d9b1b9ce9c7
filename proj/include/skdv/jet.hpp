#pragma once

#include <cmath>

namespace skdv {

// Power series in ε truncated after ε². Evaluating a functional f(εv) with
// Jet arithmetic yields f(0), [f]^(1)(v) and [f]^(2)(v) as c0, c1, c2.
struct Jet {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;

    constexpr Jet() = default;
    constexpr Jet(double a) : c0(a) {}
    constexpr Jet(double a, double b, double c) : c0(a), c1(b), c2(c) {}

    Jet& operator+=(const Jet& o) { c0 += o.c0; c1 += o.c1; c2 += o.c2; return *this; }
    Jet& operator-=(const Jet& o) { c0 -= o.c0; c1 -= o.c1; c2 -= o.c2; return *this; }
    Jet& operator*=(const Jet& o) {
        *this = Jet(c0 * o.c0, c0 * o.c1 + c1 * o.c0, c0 * o.c2 + c1 * o.c1 + c2 * o.c0);
        return *this;
    }
    Jet& operator*=(double s) { c0 *= s; c1 *= s; c2 *= s; return *this; }
};

inline Jet operator-(const Jet& a) { return {-a.c0, -a.c1, -a.c2}; }
inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator*(Jet a, const Jet& b) { return a *= b; }
inline Jet operator*(Jet a, double s) { return a *= s; }
inline Jet operator*(double s, Jet a) { return a *= s; }
inline Jet operator+(Jet a, double s) { a.c0 += s; return a; }
inline Jet operator+(double s, Jet a) { a.c0 += s; return a; }
inline Jet operator-(Jet a, double s) { a.c0 -= s; return a; }
inline Jet operator-(double s, const Jet& a) { return Jet(s - a.c0, -a.c1, -a.c2); }

inline Jet operator/(const Jet& a, const Jet& b) {
    const double q0 = a.c0 / b.c0;
    const double q1 = (a.c1 - q0 * b.c1) / b.c0;
    const double q2 = (a.c2 - q0 * b.c2 - q1 * b.c1) / b.c0;
    return {q0, q1, q2};
}
inline Jet operator/(const Jet& a, double s) { return {a.c0 / s, a.c1 / s, a.c2 / s}; }
inline Jet operator/(double s, const Jet& b) { return Jet(s) / b; }

inline double value(double x) { return x; }
inline double value(const Jet& x) { return x.c0; }

}  // namespace skdv
