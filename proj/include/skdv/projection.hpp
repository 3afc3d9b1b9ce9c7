#pragma once

#include <array>

#include "skdv/soliton.hpp"

namespace skdv {

template <class T>
struct Mat2T {
    T a00{}, a01{}, a10{}, a11{};

    T det() const { return a00 * a11 - a01 * a10; }
    Mat2T inverse() const {
        const T d = det();
        return {a11 / d, -a01 / d, -a10 / d, a00 / d};
    }
    std::array<T, 2> operator*(const std::array<T, 2>& r) const {
        return {a00 * r[0] + a01 * r[1], a10 * r[0] + a11 * r[1]};
    }
};

using Mat2 = Mat2T<double>;

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.a00 + b.a00, a.a01 + b.a01, a.a10 + b.a10, a.a11 + b.a11};
}
inline Mat2 operator*(double s, const Mat2& a) { return {s * a.a00, s * a.a01, s * a.a10, s * a.a11}; }

// K(v) together with the perturbation functionals
//   b₁ = ⟨(x∂ₓ+2)v, φ⟩, b₂ = ⟨∂ₓv, φ⟩, b₃ = ⟨(x∂ₓ+2)v, ζ⟩, b₄ = ⟨∂ₓv, ζ⟩.
struct ProjectionMatrix {
    Mat2 entries;
    double b1 = 0, b2 = 0, b3 = 0, b4 = 0;
};

ProjectionMatrix k_matrix(const SolitonContext& ctx, const Vec& v);

// Rejects K when |det K| < threshold·|det K(0)|.
inline constexpr double kDetThreshold = 0.1;

// order 0: K⁻¹(0); order 1: [K⁻¹]^(1)(v); order 2: [K⁻¹]^(2)(v).
Mat2 k_inverse_taylor(const SolitonContext& ctx, const Vec& v, int order);
Mat2 k_inverse_taylor(double c_star, double b1, double b2, double b3, double b4, int order);

}  // namespace skdv
