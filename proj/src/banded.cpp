#include "skdv/banded.hpp"

#include <algorithm>
#include <cmath>

#include "skdv/errors.hpp"

namespace skdv {

CyclicBandOperator::CyclicBandOperator(int n, int p) : n_(n), p_(p), coef_(std::size_t(n) * (2 * p + 1), 0.0) {
    if (p < 1 || p > 16) throw DomainError("cyclic band half-width must lie in [1, 16]");
    if (n < 4 * p + 2) throw DomainError("cyclic band operator too small for its bandwidth");
}

void CyclicBandOperator::apply(const Vec& u, Vec& out) const {
    out.assign(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int k = -p_; k <= p_; ++k) {
            int j = i + k;
            if (j < 0) j += n_;
            else if (j >= n_) j -= n_;
            s += at(i, k) * u[j];
        }
        out[i] = s;
    }
}

CyclicBandOperator CyclicBandOperator::shifted_identity(double s) const {
    CyclicBandOperator r(n_, p_);
    for (int i = 0; i < n_; ++i) {
        for (int k = -p_; k <= p_; ++k) r.at(i, k) = s * at(i, k);
        r.at(i, 0) += 1.0;
    }
    return r;
}

CyclicBandedSolver::CyclicBandedSolver(const CyclicBandOperator& op)
    : n_(op.size()), p_(op.half_width()), m_(n_ - p_) {
    const int w = 2 * p_ + 1;
    band_.assign(std::size_t(m_) * w, 0.0);
    spike_.assign(std::size_t(m_) * p_, 0.0);
    bottom_.assign(std::size_t(p_) * m_, 0.0);
    schur_.assign(std::size_t(p_) * p_, 0.0);
    piv_.assign(p_, 0);

    double scale = 0.0;
    for (int i = 0; i < n_; ++i) {
        for (int k = -p_; k <= p_; ++k) {
            int j = i + k;
            if (j < 0) j += n_;
            else if (j >= n_) j -= n_;
            const double a = op.at(i, k);
            scale = std::max(scale, std::abs(a));
            if (i < m_ && j < m_) b(i, j) = a;
            else if (i < m_) spike_[std::size_t(j - m_) * m_ + i] = a;
            else if (j < m_) bottom_[std::size_t(i - m_) * m_ + j] = a;
            else schur_[std::size_t(i - m_) * p_ + (j - m_)] = a;
        }
    }

    for (int k = 0; k < m_; ++k) {
        const double piv = b(k, k);
        if (std::abs(piv) < 1e-13 * scale) throw DomainError("cyclic banded solver: vanishing pivot");
        const int last = std::min(k + p_, m_ - 1);
        for (int i = k + 1; i <= last; ++i) {
            const double l = b(i, k) / piv;
            b(i, k) = l;
            for (int j = k + 1; j <= last; ++j) b(i, j) -= l * b(k, j);
        }
    }

    for (int c = 0; c < p_; ++c) band_solve(&spike_[std::size_t(c) * m_]);

    for (int r = 0; r < p_; ++r) {
        for (int c = 0; c < p_; ++c) {
            double s = 0.0;
            const double* f = &bottom_[std::size_t(r) * m_];
            const double* y = &spike_[std::size_t(c) * m_];
            for (int i = 0; i < m_; ++i) s += f[i] * y[i];
            schur_[std::size_t(r) * p_ + c] -= s;
        }
    }

    for (int k = 0; k < p_; ++k) {
        int best = k;
        for (int i = k + 1; i < p_; ++i)
            if (std::abs(schur_[i * p_ + k]) > std::abs(schur_[best * p_ + k])) best = i;
        piv_[k] = best;
        if (best != k)
            for (int j = 0; j < p_; ++j) std::swap(schur_[k * p_ + j], schur_[best * p_ + j]);
        const double d = schur_[k * p_ + k];
        if (std::abs(d) < 1e-13 * scale) throw DomainError("cyclic banded solver: singular border block");
        for (int i = k + 1; i < p_; ++i) {
            const double l = schur_[i * p_ + k] / d;
            schur_[i * p_ + k] = l;
            for (int j = k + 1; j < p_; ++j) schur_[i * p_ + j] -= l * schur_[k * p_ + j];
        }
    }
}

void CyclicBandedSolver::band_solve(double* y) const {
    for (int i = 1; i < m_; ++i) {
        double s = y[i];
        for (int k = std::max(0, i - p_); k < i; ++k) s -= b(i, k) * y[k];
        y[i] = s;
    }
    for (int i = m_ - 1; i >= 0; --i) {
        double s = y[i];
        const int last = std::min(i + p_, m_ - 1);
        for (int j = i + 1; j <= last; ++j) s -= b(i, j) * y[j];
        y[i] = s / b(i, i);
    }
}

void CyclicBandedSolver::solve(Vec& rhs) const {
    double* z = rhs.data();
    band_solve(z);
    double y2[16];
    for (int r = 0; r < p_; ++r) {
        double s = rhs[m_ + r];
        const double* f = &bottom_[std::size_t(r) * m_];
        for (int i = 0; i < m_; ++i) s -= f[i] * z[i];
        y2[r] = s;
    }
    for (int k = 0; k < p_; ++k) std::swap(y2[k], y2[piv_[k]]);
    for (int i = 1; i < p_; ++i)
        for (int k = 0; k < i; ++k) y2[i] -= schur_[i * p_ + k] * y2[k];
    for (int i = p_ - 1; i >= 0; --i) {
        for (int j = i + 1; j < p_; ++j) y2[i] -= schur_[i * p_ + j] * y2[j];
        y2[i] /= schur_[i * p_ + i];
    }
    for (int c = 0; c < p_; ++c) {
        const double* y = &spike_[std::size_t(c) * m_];
        for (int i = 0; i < m_; ++i) z[i] -= y[i] * y2[c];
        rhs[m_ + c] = y2[c];
    }
}

}  // namespace skdv
