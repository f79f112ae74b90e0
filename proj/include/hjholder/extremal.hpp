/**
 * @file extremal.hpp
 * @brief Symmetric eigenvalues and the one-sided extremal operators m^+, m^-.
 *
 * m^+(X) is the largest positive eigenvalue of X (zero if none);
 * m^-(X) is the smallest negative eigenvalue of X (zero if none).
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "hjholder/error.hpp"

namespace hjholder {

/// d x d real symmetric matrix, row-major. Symmetrized on construction.
class SymMatrix {
public:
    SymMatrix() = default;

    explicit SymMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, 0.0) {}

    SymMatrix(std::size_t dim, std::span<const double> entries) : dim_(dim), a_(entries.begin(), entries.end()) {
        require(a_.size() == dim * dim, Errc::InvalidInput, "SymMatrix entry count must be dim^2");
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = i + 1; j < dim; ++j) {
                const double s = 0.5 * (a_[i * dim + j] + a_[j * dim + i]);
                a_[i * dim + j] = s;
                a_[j * dim + i] = s;
            }
        }
    }

    SymMatrix(std::size_t dim, std::initializer_list<double> entries)
        : SymMatrix(dim, std::span<const double>(entries.begin(), entries.size())) {}

    static SymMatrix identity(std::size_t dim) {
        SymMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    static SymMatrix diagonal(std::span<const double> diag) {
        SymMatrix m(diag.size());
        for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
        return m;
    }

    std::size_t dim() const { return dim_; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
    std::span<const double> entries() const { return a_; }

    /// Symmetric write: sets both (i,j) and (j,i).
    void set(std::size_t i, std::size_t j, double v) {
        a_[i * dim_ + j] = v;
        a_[j * dim_ + i] = v;
    }

    SymMatrix operator+(const SymMatrix& o) const {
        SymMatrix r(*this);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] += o.a_[k];
        return r;
    }
    SymMatrix operator-(const SymMatrix& o) const {
        SymMatrix r(*this);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] -= o.a_[k];
        return r;
    }
    SymMatrix operator*(double c) const {
        SymMatrix r(*this);
        for (auto& v : r.a_) v *= c;
        return r;
    }
    SymMatrix operator-() const { return *this * -1.0; }

    double quad_form(std::span<const double> v) const {
        double s = 0.0;
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) s += v[i] * a_[i * dim_ + j] * v[j];
        return s;
    }

    double frobenius() const {
        double s = 0.0;
        for (double v : a_) s += v * v;
        return std::sqrt(s);
    }

private:
    double& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }

    std::size_t dim_ = 0;
    std::vector<double> a_;
};

struct EigenDecomposition {
    std::vector<double> values;   // nondecreasing
    std::vector<double> vectors;  // column k (row-major d x d) is the eigenvector of values[k]
};

/// Cyclic Jacobi rotations until the off-diagonal mass is below tol * ||X||_F.
inline EigenDecomposition jacobi_eigen(const SymMatrix& X, double tol = 1e-12, int max_sweeps = 100) {
    const std::size_t n = X.dim();
    std::vector<double> a(X.entries().begin(), X.entries().end());
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
    const double scale = std::max(X.frobenius(), std::numeric_limits<double>::min());

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
        if (std::sqrt(2.0 * off) <= tol * scale) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p], akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k], aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p], vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a[i * n + i] < a[j * n + j]; });
    EigenDecomposition out;
    out.values.resize(n);
    out.vectors.resize(n * n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a[order[k] * n + order[k]];
        for (std::size_t r = 0; r < n; ++r) out.vectors[r * n + k] = v[r * n + order[k]];
    }
    return out;
}

namespace detail {

inline std::vector<double> eigs_3x3(const SymMatrix& X) {
    const double a00 = X(0, 0), a11 = X(1, 1), a22 = X(2, 2);
    const double a01 = X(0, 1), a02 = X(0, 2), a12 = X(1, 2);
    const double off = a01 * a01 + a02 * a02 + a12 * a12;
    std::vector<double> ev;
    if (off == 0.0) {
        ev = {a00, a11, a22};
        std::sort(ev.begin(), ev.end());
        return ev;
    }
    const double q = (a00 + a11 + a22) / 3.0;
    const double b00 = a00 - q, b11 = a11 - q, b22 = a22 - q;
    const double p2 = b00 * b00 + b11 * b11 + b22 * b22 + 2.0 * off;
    const double pp = std::sqrt(p2 / 6.0);
    const double detB = (b00 * (b11 * b22 - a12 * a12) - a01 * (a01 * b22 - a12 * a02) +
                         a02 * (a01 * a12 - b11 * a02)) / (pp * pp * pp);
    const double r = std::clamp(0.5 * detB, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e_hi = q + 2.0 * pp * std::cos(phi);
    const double e_lo = q + 2.0 * pp * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    const double e_mid = 3.0 * q - e_hi - e_lo;
    ev = {e_lo, e_mid, e_hi};

    // Newton polish on det(X - lambda I); a step is kept only if it lowers |f|.
    const double c2 = a00 + a11 + a22;
    const double c1 = a00 * a11 - a01 * a01 + a00 * a22 - a02 * a02 + a11 * a22 - a12 * a12;
    const double c0 = a00 * (a11 * a22 - a12 * a12) - a01 * (a01 * a22 - a12 * a02) +
                      a02 * (a01 * a12 - a11 * a02);
    auto f = [&](double l) { return ((-l + c2) * l - c1) * l + c0; };
    auto df = [&](double l) { return (-3.0 * l + 2.0 * c2) * l - c1; };
    const double scale = std::max({std::abs(e_lo), std::abs(e_hi), pp});
    for (auto& l : ev) {
        for (int it = 0; it < 2; ++it) {
            const double fl = f(l), dl = df(l);
            if (fl == 0.0 || dl == 0.0) break;
            const double step = fl / dl;
            if (std::abs(step) > 1e-6 * scale) break;
            const double cand = l - step;
            if (std::abs(f(cand)) < std::abs(fl)) l = cand; else break;
        }
    }
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace detail

/// All eigenvalues in nondecreasing order. Closed form for d <= 3, cyclic Jacobi otherwise.
inline std::vector<double> sym_eigs(const SymMatrix& X) {
    switch (X.dim()) {
        case 0: return {};
        case 1: return {X(0, 0)};
        case 2: {
            const double m = 0.5 * (X(0, 0) + X(1, 1));
            const double h = std::hypot(0.5 * (X(0, 0) - X(1, 1)), X(0, 1));
            return {m - h, m + h};
        }
        case 3: return detail::eigs_3x3(X);
        default: return jacobi_eigen(X).values;
    }
}

inline double lambda_max(const SymMatrix& X) {
    if (X.dim() == 1) return X(0, 0);
    return sym_eigs(X).back();
}

inline double lambda_min(const SymMatrix& X) {
    if (X.dim() == 1) return X(0, 0);
    return sym_eigs(X).front();
}

/// Largest positive eigenvalue, zero if none.
inline double m_plus(const SymMatrix& X) { return std::max(lambda_max(X), 0.0); }

/// Smallest negative eigenvalue, zero if none.
inline double m_minus(const SymMatrix& X) { return std::min(lambda_min(X), 0.0); }

}  // namespace hjholder
