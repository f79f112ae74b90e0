/**
 * @file variational.hpp
 * @brief Legendre transforms of power Hamiltonians and the Hopf-Lax
 *        (Lax-Oleinik) evaluator over sampled parabolic boundary data.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "hjholder/core.hpp"

namespace hjholder {

/**
 * L(r) = shift + c_p * a_factor * |r|^{p'}.
 *
 * For the Hamiltonian xi -> h + A|xi|^p the transform has c_p = (p-1) p^{-p'},
 * a_factor = A^{1-p'} and shift = -h.
 */
struct PowerLagrangian {
    double c_p = 0.0;
    double p_prime = 2.0;
    double coeff_A_power = 1.0;
    double shift = 0.0;

    double of_norm(double r) const {
        return shift + c_p * coeff_A_power * std::pow(std::abs(r), p_prime);
    }
    double operator()(std::span<const double> r) const { return of_norm(norm(r)); }

    /// Lipschitz bound of L on the ball |r| <= radius.
    double lipschitz_on(double radius) const {
        return c_p * coeff_A_power * p_prime * std::pow(radius, p_prime - 1.0);
    }
};

/// (p-1) p^{-p'}, the coefficient of the transform of |xi|^p.
inline double legendre_coefficient(double p) {
    require(std::isfinite(p) && p > 1.0, Errc::DomainError, "p must be > 1");
    const double pp = p / (p - 1.0);
    return (p - 1.0) * std::pow(p, -pp);
}

/// Closed-form Legendre transform of xi -> shift + A|xi|^p.
inline PowerLagrangian legendre_closed(double p, double A, double shift = 0.0) {
    require(std::isfinite(p) && p > 1.0, Errc::DomainError, "p must be > 1");
    require(std::isfinite(A) && A > 0.0, Errc::DomainError, "A must be > 0");
    const double pp = p / (p - 1.0);
    return {legendre_coefficient(p), pp, std::pow(A, 1.0 - pp), -shift};
}

/**
 * Brute-force Legendre transform: maximizes q.xi - (shift + A|xi|^p) by dense
 * sampling along the line through q, followed by repeated window zooming
 * around the best sample. Independent of legendre_closed.
 *
 * Throws WindowTooSmall if the first scan peaks at the edge of the window.
 */
inline double legendre_brute(double p, double A, double shift, std::span<const double> q,
                             double search_radius, std::size_t n_samples = 10001) {
    require(std::isfinite(p) && p > 1.0, Errc::DomainError, "p must be > 1");
    require(std::isfinite(A) && A > 0.0, Errc::DomainError, "A must be > 0");
    require(n_samples >= 100, Errc::InvalidInput, "n_samples must be >= 100");
    require(search_radius > 0.0, Errc::InvalidInput, "search_radius must be > 0");
    const double qn = norm(q);
    auto objective = [&](double s) { return s * qn - (shift + A * std::pow(std::abs(s), p)); };

    double lo = -search_radius, hi = search_radius;
    double best_s = 0.0, best = -std::numeric_limits<double>::infinity();
    for (int pass = 0; pass < 200; ++pass) {
        const double step = (hi - lo) / static_cast<double>(n_samples - 1);
        std::size_t best_i = 0;
        best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n_samples; ++i) {
            const double s = lo + static_cast<double>(i) * step;
            const double v = objective(s);
            if (v > best) {
                best = v;
                best_i = i;
            }
        }
        best_s = lo + static_cast<double>(best_i) * step;
        if (pass == 0 && (best_i == 0 || best_i == n_samples - 1)) {
            raise(Errc::WindowTooSmall, "maximum attained on the boundary of the search window");
        }
        if (step <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(best_s))) break;
        lo = best_s - 2.0 * step;
        hi = best_s + 2.0 * step;
    }
    return best;
}

/// One sample (y, s, v(y,s)) of data on the parabolic boundary.
struct BoundarySample {
    Point y;
    double s = 0.0;
    double v = 0.0;
};

struct ParabolicBoundary {
    std::vector<BoundarySample> samples;
};

/**
 * Samples v on the parabolic boundary of B_R(0) x [t0, t1]:
 * a uniform lattice of spacing h on the bottom ball (|y| <= R) and an
 * angle-uniform by time-uniform product grid on the lateral boundary.
 * Lateral sampling is available for d in {1, 2}.
 */
inline ParabolicBoundary sample_parabolic_boundary(
    int d, double R, double t0, double t1, double h,
    const std::function<double(std::span<const double>, double)>& v, bool include_lateral = true) {
    require(d >= 1, Errc::DomainError, "dimension must be >= 1");
    require(R > 0.0 && h > 0.0 && t1 > t0, Errc::InvalidInput, "bad boundary sampling parameters");
    ParabolicBoundary out;
    const auto n = static_cast<long>(std::floor(R / h + 1e-9));
    const auto du = static_cast<std::size_t>(d);
    std::vector<long> idx(du, -n);
    Point y(du);
    while (true) {
        for (std::size_t a = 0; a < du; ++a) y[a] = static_cast<double>(idx[a]) * h;
        if (norm(y) <= R * (1.0 + 1e-12)) out.samples.push_back({y, t0, v(y, t0)});
        std::size_t a = 0;
        for (; a < du; ++a) {
            if (idx[a] < n) { ++idx[a]; break; }
            idx[a] = -n;
        }
        if (a == du) break;
    }
    if (!include_lateral) return out;
    require(d <= 2, Errc::DomainError, "lateral boundary sampling supports d <= 2");
    const auto nt = static_cast<std::size_t>(std::ceil((t1 - t0) / h - 1e-9));
    const double ht = (t1 - t0) / static_cast<double>(nt);
    std::vector<Point> rim;
    if (d == 1) {
        rim = {{-R}, {R}};
    } else {
        const auto na = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi * R / h)));
        for (std::size_t j = 0; j < na; ++j) {
            const double ang = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(na);
            rim.push_back({R * std::cos(ang), R * std::sin(ang)});
        }
    }
    for (std::size_t k = 0; k <= nt; ++k) {
        const double s = t0 + static_cast<double>(k) * ht;
        for (const auto& pnt : rim) out.samples.push_back({pnt, s, v(pnt, s)});
    }
    return out;
}

/**
 * min over boundary samples (y, s) with t - s >= tau_min of
 *   v(y, s) + (t - s) L((x - y) / (t - s)).
 */
inline double hopf_lax_eval(const ParabolicBoundary& boundary, const PowerLagrangian& lag,
                            std::span<const double> x, double t, double tau_min = 1e-9) {
    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    Point diff(x.size());
    for (const auto& b : boundary.samples) {
        const double tau = t - b.s;
        if (tau < tau_min) continue;
        require(b.y.size() == x.size(), Errc::InvalidInput, "boundary sample dimension mismatch");
        for (std::size_t a = 0; a < x.size(); ++a) diff[a] = x[a] - b.y[a];
        const double val = b.v + tau * lag.of_norm(norm(diff) / tau);
        any = true;
        if (val < best) best = val;
    }
    if (!any) raise(Errc::EmptyBoundary, "no boundary candidate with s < t");
    return best;
}

}  // namespace hjholder
