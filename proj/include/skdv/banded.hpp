#pragma once

#include <vector>

#include "skdv/grid.hpp"

namespace skdv {

// Square operator on a periodic ring whose row i touches columns i−p..i+p
// (indices mod n). Entry (i, i+k) lives at coef[i*(2p+1) + k + p].
class CyclicBandOperator {
public:
    CyclicBandOperator(int n, int p);

    int size() const { return n_; }
    int half_width() const { return p_; }
    double& at(int row, int offset) { return coef_[row * (2 * p_ + 1) + offset + p_]; }
    double at(int row, int offset) const { return coef_[row * (2 * p_ + 1) + offset + p_]; }

    void apply(const Vec& u, Vec& out) const;
    // Returns I + s·this.
    CyclicBandOperator shifted_identity(double s) const;

private:
    int n_, p_;
    std::vector<double> coef_;
};

// LU factorization of a cyclic banded matrix without pivoting: the first
// n−p unknowns form a banded block, the last p are eliminated through a
// dense Schur complement. Intended for operators of the form I + h·A with
// A close to skew-adjoint; a vanishing pivot raises DomainError.
class CyclicBandedSolver {
public:
    explicit CyclicBandedSolver(const CyclicBandOperator& op);
    void solve(Vec& rhs) const;
    int size() const { return n_; }

private:
    int n_, p_, m_;
    std::vector<double> band_;   // m × (2p+1), LU in place
    std::vector<double> spike_;  // m × p, B⁻¹E
    std::vector<double> bottom_; // p × m, F
    std::vector<double> schur_;  // p × p, LU of C − F B⁻¹E (partial pivoting)
    std::vector<int> piv_;

    double& b(int i, int j) { return band_[i * (2 * p_ + 1) + (j - i) + p_]; }
    double b(int i, int j) const { return band_[i * (2 * p_ + 1) + (j - i) + p_]; }
    void band_solve(double* y) const;
};

}  // namespace skdv
