/**
 * @file barriers.hpp
 * @brief Explicit super/subsolution barriers, their residuals, and solvers
 *        for the constant systems that make the comparison arguments work.
 *
 * Supersolution (p > 2):  U(x,t) = C t^{-1/(p-1)} (|x|^2 + eta t)^{p'/2}
 *   U_t + (1/A)|DU|^p - eps m^+(D^2U) >= 0.
 * Subsolution:            L(x,t) = theta b(|x|/R + t/4) - (C_b eps theta^2/R^2) t - eps t
 *   L_t + A|DL|^p - eps m^-(D^2L) + eps <= 0.
 *
 * Residual inequalities are verified on finite grids, never assumed; a passing
 * scan certifies the grid nodes only.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "hjholder/core.hpp"
#include "hjholder/extremal.hpp"
#include "hjholder/variational.hpp"

namespace hjholder {

/// Value and exact derivatives of a barrier at one point.
struct BarrierJet {
    double value = 0.0;
    std::vector<double> gradient;
    SymMatrix hessian;
    double time_derivative = 0.0;
};

/**
 * Scan lattice for residual verification: the box [-x_max, x_max]^d restricted
 * to |x| <= x_max with n_x nodes per axis, times n_t levels on [t_min, t_max]
 * (log-spaced when log_time).
 */
struct BarrierGrid {
    double x_max = 2.0;
    std::size_t n_x = 65;
    double t_min = 1e-3;
    double t_max = 1.0;
    std::size_t n_t = 65;
    bool log_time = true;

    std::vector<double> times() const {
        std::vector<double> ts(n_t);
        for (std::size_t k = 0; k < n_t; ++k) {
            const double f = n_t == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(n_t - 1);
            ts[k] = log_time ? t_min * std::pow(t_max / t_min, f) : t_min + f * (t_max - t_min);
        }
        return ts;
    }

    double spacing() const { return 2.0 * x_max / static_cast<double>(n_x - 1); }

    /// fn(x, t) over all nodes.
    template <class Fn>
    void for_each(int d, Fn&& fn) const {
        const auto du = static_cast<std::size_t>(d);
        const auto ts = times();
        const double h = spacing();
        std::vector<std::size_t> idx(du, 0);
        Point x(du);
        while (true) {
            for (std::size_t a = 0; a < du; ++a) x[a] = -x_max + static_cast<double>(idx[a]) * h;
            if (norm(x) <= x_max * (1.0 + 1e-12)) {
                for (double t : ts) fn(std::span<const double>(x), t);
            }
            std::size_t a = 0;
            for (; a < du; ++a) {
                if (idx[a] + 1 < n_x) { ++idx[a]; break; }
                idx[a] = 0;
            }
            if (a == du) break;
        }
    }
};

/// Worst residual found by a grid scan.
struct ScanReport {
    double worst = 0.0;  // min residual (super) or max residual (sub)
    Point x;
    double t = 0.0;
    std::size_t nodes = 0;
    double grid_spacing = 0.0;
    bool pass = false;
};

// ---------------------------------------------------------------------------
// Supersolution
// ---------------------------------------------------------------------------

/// U(x,t) = C t^{-1/(p-1)} (|x|^2 + eta t)^{p'/2}; params.eps() is the diffusion size.
class SupersolutionBarrier {
public:
    SupersolutionBarrier(double C, double eta, EquationParams params)
        : C_(C), eta_(eta), params_(std::move(params))
    {
        params_.require_superquadratic();
        require(C > 0.0 && std::isfinite(C), Errc::DomainError, "C must be > 0");
        require(eta > 0.0 && std::isfinite(eta), Errc::DomainError, "eta must be > 0");
    }

    double C() const { return C_; }
    double eta() const { return eta_; }
    const EquationParams& params() const { return params_; }

    double value(std::span<const double> x, double t) const {
        require(t > 0.0, Errc::DomainError, "supersolution requires t > 0");
        const double p = params_.p(), pp = params_.p_prime();
        return C_ * std::pow(t, -1.0 / (p - 1.0)) * std::pow(norm2(x) + eta_ * t, 0.5 * pp);
    }

private:
    double C_;
    double eta_;
    EquationParams params_;
};

/**
 * Exact derivatives by the chain rule on g(s) = s^{p'/2}, s = |x|^2 + eta t:
 *   DU   = C t^{-k} p' s^{p'/2-1} x
 *   D^2U = C t^{-k} p' s^{p'/2-2} (s I + (p'-2) x x^T)
 *   U_t  = C t^{-k-1} s^{p'/2} (-k + (p'/2) eta t / s),   k = 1/(p-1).
 */
inline BarrierJet supersolution_eval(const SupersolutionBarrier& bar, std::span<const double> x, double t) {
    require(t > 0.0, Errc::DomainError, "supersolution requires t > 0");
    const double p = bar.params().p(), pp = bar.params().p_prime();
    const double k = 1.0 / (p - 1.0);
    const double C = bar.C(), eta = bar.eta();
    const std::size_t d = x.size();
    const double s = norm2(x) + eta * t;
    const double tk = std::pow(t, -k);
    const double g = std::pow(s, 0.5 * pp);

    BarrierJet jet;
    jet.value = C * tk * g;
    jet.time_derivative = C * tk / t * g * (-k + 0.5 * pp * eta * t / s);
    const double gfac = C * tk * pp * g / s;
    jet.gradient.resize(d);
    for (std::size_t a = 0; a < d; ++a) jet.gradient[a] = gfac * x[a];
    const double hfac = gfac / s;
    jet.hessian = SymMatrix(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            const double v = hfac * ((i == j ? s : 0.0) + (pp - 2.0) * x[i] * x[j]);
            jet.hessian.set(i, j, v);
        }
    }
    return jet;
}

/// U_t + (1/A)|DU|^p - eps m^+(D^2U).
inline double supersolution_residual(const SupersolutionBarrier& bar, std::span<const double> x, double t) {
    const auto jet = supersolution_eval(bar, x, t);
    const auto& prm = bar.params();
    return jet.time_derivative + std::pow(norm(jet.gradient), prm.p()) / prm.A() -
           prm.eps() * m_plus(jet.hessian);
}

inline ScanReport scan_supersolution(const SupersolutionBarrier& bar, const BarrierGrid& grid,
                                     double tolerance = -1e-10) {
    ScanReport rep;
    rep.worst = std::numeric_limits<double>::infinity();
    rep.grid_spacing = grid.spacing();
    grid.for_each(bar.params().d(), [&](std::span<const double> x, double t) {
        const double r = supersolution_residual(bar, x, t);
        ++rep.nodes;
        if (r < rep.worst) {
            rep.worst = r;
            rep.x.assign(x.begin(), x.end());
            rep.t = t;
        }
    });
    rep.pass = rep.worst >= tolerance;
    return rep;
}

struct SupersolutionConstants {
    double C = 0.0;
    double eps0 = 0.0;
    int iterations = 0;
    ScanReport report;  // scan at eps = eta * eps0
};

/**
 * Doubles C and halves eps0 from (C_init, eps0_init) until the residual scan at
 * eps = eta * eps0 is nonnegative at every node. The residual is nonincreasing
 * in eps, so the certificate covers all eps <= eta * eps0.
 */
inline SupersolutionConstants find_supersolution_constants(const EquationParams& params, double eta,
                                                           const BarrierGrid& grid = {},
                                                           double C_init = 1.0, double eps0_init = 1.0,
                                                           int max_iterations = 80) {
    params.require_superquadratic();
    require(eta > 0.0, Errc::DomainError, "eta must be > 0");
    double C = C_init, eps0 = eps0_init;
    for (int it = 0; it < max_iterations; ++it) {
        SupersolutionBarrier bar(C, eta, params.with_eps(eta * eps0));
        auto rep = scan_supersolution(bar, grid, 0.0);
        if (rep.pass) return {C, eps0, it, rep};
        C *= 2.0;
        eps0 *= 0.5;
    }
    raise(Errc::SearchFailed, "no (C, eps0) pair passed the supersolution scan");
}

// ---------------------------------------------------------------------------
// Bump profile and subsolution
// ---------------------------------------------------------------------------

/**
 * Nonincreasing C^2 profile: b = 1 on (-inf, 3/4], b = 0 on [1, inf), and
 * b(s) = 1 - sigma(4(s - 3/4)) in between with sigma(x) = 6x^5 - 15x^4 + 10x^3.
 */
class BumpFunction {
public:
    struct Value {
        double b, db, d2b;
    };

    Value operator()(double s) const {
        if (s <= 0.75) return {1.0, 0.0, 0.0};
        if (s >= 1.0) return {0.0, 0.0, 0.0};
        const double x = 4.0 * (s - 0.75);
        const double sig = x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
        const double dsig = 30.0 * x * x * (1.0 - x) * (1.0 - x);
        const double d2sig = 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
        return {1.0 - sig, -4.0 * dsig, -16.0 * d2sig};
    }

    /// max |b'| = 4 * 30 (1/2)^2 (1/2)^2, attained at s = 7/8.
    static constexpr double sup_db() { return 7.5; }

    /// max |b''| = 16 * 60 x(1-x)(1-2x) at x = (1 - 1/sqrt 3)/2, where x(1-x)(1-2x) = sqrt(3)/18.
    static double sup_d2b() { return 160.0 / std::sqrt(3.0); }
};

inline BumpFunction::Value bump_eval(const BumpFunction& b, double s) { return b(s); }

class SubsolutionBarrier {
public:
    SubsolutionBarrier(double theta, double R, double eps, double C_b, BumpFunction bump = {})
        : theta_(theta), R_(R), eps_(eps), C_b_(C_b), bump_(bump)
    {
        require(theta > 0.0 && theta < 0.25, Errc::DomainError, "theta must lie in (0, 1/4)");
        require(R > 0.0, Errc::DomainError, "R must be > 0");
        require(eps >= 0.0, Errc::DomainError, "eps must be >= 0");
        require(C_b >= 0.0, Errc::DomainError, "C_b must be >= 0");
    }

    double theta() const { return theta_; }
    double R() const { return R_; }
    double eps() const { return eps_; }
    double C_b() const { return C_b_; }
    const BumpFunction& bump() const { return bump_; }

    SubsolutionBarrier with_eps(double eps) const { return {theta_, R_, eps, C_b_, bump_}; }

private:
    double theta_;
    double R_;
    double eps_;
    double C_b_;
    BumpFunction bump_;
};

/**
 * Exact derivatives of L. With rho = |x|/R + t/4 and xh = x/|x|:
 *   DL   = theta b'(rho) xh / R
 *   D^2L = theta [ (b''/R^2) xh xh^T + (b'/(R|x|)) (I - xh xh^T) ]
 * and at x = 0 the radial limit theta (b''/R^2) I.
 */
inline BarrierJet subsolution_eval(const SubsolutionBarrier& bar, std::span<const double> x, double t) {
    const double th = bar.theta(), R = bar.R(), eps = bar.eps();
    const std::size_t d = x.size();
    const double r = norm(x);
    const auto bv = bar.bump()(r / R + 0.25 * t);
    const double drift = bar.C_b() * eps * th * th / (R * R) + eps;

    BarrierJet jet;
    jet.value = th * bv.b - drift * t;
    jet.time_derivative = 0.25 * th * bv.db - drift;
    jet.gradient.assign(d, 0.0);
    jet.hessian = SymMatrix(d);
    if (r == 0.0) {
        for (std::size_t i = 0; i < d; ++i) jet.hessian.set(i, i, th * bv.d2b / (R * R));
        return jet;
    }
    const double radial = th * bv.d2b / (R * R);
    const double tangential = th * bv.db / (R * r);
    for (std::size_t i = 0; i < d; ++i) {
        const double xi = x[i] / r;
        jet.gradient[i] = th * bv.db * xi / R;
        for (std::size_t j = i; j < d; ++j) {
            const double xj = x[j] / r;
            const double v = radial * xi * xj + tangential * ((i == j ? 1.0 : 0.0) - xi * xj);
            jet.hessian.set(i, j, v);
        }
    }
    return jet;
}

/// L_t + A|DL|^p - eps m^-(D^2L) + eps, for t in [0, 1].
inline double subsolution_residual(const SubsolutionBarrier& bar, const EquationParams& params,
                                   std::span<const double> x, double t) {
    require(t >= 0.0 && t <= 1.0, Errc::DomainError, "subsolution residual requires t in [0, 1]");
    const auto jet = subsolution_eval(bar, x, t);
    return jet.time_derivative + params.A() * std::pow(norm(jet.gradient), params.p()) -
           bar.eps() * m_minus(jet.hessian) + bar.eps();
}

inline ScanReport scan_subsolution(const SubsolutionBarrier& bar, const EquationParams& params,
                                   const BarrierGrid& grid, double tolerance = 1e-10) {
    ScanReport rep;
    rep.worst = -std::numeric_limits<double>::infinity();
    rep.grid_spacing = grid.spacing();
    grid.for_each(params.d(), [&](std::span<const double> x, double t) {
        const double r = subsolution_residual(bar, params, x, t);
        ++rep.nodes;
        if (r > rep.worst) {
            rep.worst = r;
            rep.x.assign(x.begin(), x.end());
            rep.t = t;
        }
    });
    rep.pass = rep.worst <= tolerance;
    return rep;
}

/**
 * Dense scan across the transition band of the bump, where all the action is:
 * n_s profile arguments s in [3/4, 1] times n_t levels on [0, 1], each placed
 * at x = R (s - t/4) e_1. Off the band the residual is -C_b eps theta^2 / R^2.
 */
inline ScanReport scan_subsolution_band(const SubsolutionBarrier& bar, const EquationParams& params,
                                        std::size_t n_s = 8193, std::size_t n_t = 65,
                                        double tolerance = 1e-10) {
    require(n_s >= 2 && n_t >= 2, Errc::InvalidInput, "band scan needs >= 2 samples per direction");
    ScanReport rep;
    rep.worst = -std::numeric_limits<double>::infinity();
    rep.grid_spacing = bar.R() * 0.25 / static_cast<double>(n_s - 1);
    Point x(static_cast<std::size_t>(params.d()), 0.0);
    for (std::size_t k = 0; k < n_t; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(n_t - 1);
        for (std::size_t i = 0; i < n_s; ++i) {
            const double s = 0.75 + 0.25 * static_cast<double>(i) / static_cast<double>(n_s - 1);
            const double r = bar.R() * (s - 0.25 * t);
            if (r < 0.0) continue;
            x[0] = r;
            const double res = subsolution_residual(bar, params, x, t);
            ++rep.nodes;
            if (res > rep.worst) {
                rep.worst = res;
                rep.x = x;
                rep.t = t;
            }
        }
    }
    rep.pass = rep.worst <= tolerance;
    return rep;
}

/// Default subsolution scan: |x| <= 2R with 65 nodes per axis, t uniform on [0, 1].
inline BarrierGrid subsolution_grid(double R, std::size_t n = 65) {
    return {2.0 * R, n, 0.0, 1.0, n, false};
}

struct SubsolutionConstants {
    double C_b = 0.0;
    double theta_max = 0.0;  // min(1/4 - margin, (R^p / (4 A |b'|^{p-1}))^{1/(p-1)})
    double theta = 0.0;      // working value: theta^{p-1} = half the bound, capped by theta_max
    double eps = 0.0;        // largest eps (by halving) passing both scans at theta
    ScanReport report;
};

/**
 * C_b = 2|b'| + |b''|/R and the theta bound from the gradient term. The working
 * theta sits strictly below the bound so the gradient term dominates; eps
 * starts at min(theta/2, 1/(2 C_b)) and is halved until both the grid scan and
 * the dense band scan pass.
 */
inline SubsolutionConstants find_subsolution_constants(const EquationParams& params, double R,
                                                       const BarrierGrid& grid,
                                                       double theta_margin = 1e-3,
                                                       int max_halvings = 80) {
    require(R > 0.0, Errc::DomainError, "R must be > 0");
    const double p = params.p(), A = params.A();
    const double db = BumpFunction::sup_db();
    SubsolutionConstants out;
    out.C_b = 2.0 * db + BumpFunction::sup_d2b() / R;
    const double bound = std::pow(R, p) / (4.0 * A * std::pow(db, p - 1.0));
    out.theta_max = std::min(0.25 - theta_margin, std::pow(bound, 1.0 / (p - 1.0)));
    out.theta = std::min(out.theta_max, std::pow(0.5 * bound, 1.0 / (p - 1.0)));
    double eps = std::min(0.5 * out.theta, 0.5 / out.C_b);
    for (int it = 0; it < max_halvings; ++it) {
        SubsolutionBarrier bar(out.theta, R, eps, out.C_b);
        auto rep = scan_subsolution(bar, params, grid, 0.0);
        if (rep.pass && scan_subsolution_band(bar, params, 8193, 65, 0.0).pass) {
            out.eps = eps;
            out.report = rep;
            return out;
        }
        eps *= 0.5;
    }
    raise(Errc::SearchFailed, "subsolution scan failed for every eps tried");
}

inline SubsolutionConstants find_subsolution_constants(const EquationParams& params, double R) {
    return find_subsolution_constants(params, R, subsolution_grid(R));
}

// ---------------------------------------------------------------------------
// First-order constants (T, theta, eps)
// ---------------------------------------------------------------------------

struct FirstOrderMargins {
    double a1 = 0.0;  // (1 - 4 theta) - c_p (T-1)^{1-p'} A^{p'-1} 3^{p'}
    double a2 = 0.0;  // c_p T^{1-p'} A^{p'-1} - 2 theta
    double a3 = 0.0;  // theta - eps T
    bool ok() const { return a1 >= 0.0 && a2 >= 0.0 && a3 >= 0.0; }
};

struct FirstOrderConstants {
    double T = 0.0;
    double theta = 0.0;
    double eps = 0.0;
};

inline FirstOrderMargins first_order_margins(const EquationParams& params, const FirstOrderConstants& k) {
    const double cp = legendre_coefficient(params.p());
    const double pp = params.p_prime();
    const double Apow = std::pow(params.A(), pp - 1.0);
    FirstOrderMargins m;
    m.a1 = (1.0 - 4.0 * k.theta) - cp * std::pow(k.T - 1.0, 1.0 - pp) * Apow * std::pow(3.0, pp);
    m.a2 = cp * std::pow(k.T, 1.0 - pp) * Apow - 2.0 * k.theta;
    m.a3 = k.theta - k.eps * k.T;
    return m;
}

/**
 * T doubles from 2 until c_p (T-1)^{1-p'} A^{p'-1} 3^{p'} < 1; theta is the
 * largest value allowed by the first two inequalities; eps = theta / (2T).
 */
inline FirstOrderConstants first_order_constants(const EquationParams& params) {
    const double cp = legendre_coefficient(params.p());
    const double pp = params.p_prime();
    const double Apow = std::pow(params.A(), pp - 1.0);
    auto lhs1 = [&](double T) { return cp * std::pow(T - 1.0, 1.0 - pp) * Apow * std::pow(3.0, pp); };
    double T = 2.0;
    while (!(lhs1(T) < 1.0)) {
        T *= 2.0;
        require(std::isfinite(T), Errc::SearchFailed, "horizon T overflowed");
    }
    const double lhs2 = cp * std::pow(T, 1.0 - pp) * Apow;
    FirstOrderConstants k{T, std::min(0.25 * (1.0 - lhs1(T)), 0.5 * lhs2), 0.0};
    k.eps = k.theta / (2.0 * T);
    while (!first_order_margins(params, k).ok()) {
        k.theta = std::nextafter(k.theta, 0.0);
        k.eps = k.theta / (2.0 * T);
    }
    return k;
}

// ---------------------------------------------------------------------------
// Two-case improvement-of-oscillation check
// ---------------------------------------------------------------------------

struct TwoCaseReport {
    int which_case = 0;    // 1: a bottom value <= theta; 2: all bottom values > theta
    bool pass = false;
    double bottom_min = 0.0;
    double bound = 0.0;    // 1 - theta (case 1) or theta / 2 (case 2)
    double witness = 0.0;  // max (case 1) or min (case 2) over the target set
    Point witness_x;
    double witness_t = 0.0;
};

/**
 * v must satisfy 0 <= v <= 1 on B_{R+r} x [t_bottom, t_bottom + 1]; with
 * shift_first, v is u minus its minimum there, otherwise v = u.
 * Case 1 (some v(y, t_bottom) <= theta, y in B_R): require v <= 1 - theta on
 * B_R x [t_bottom + 1/2, t_bottom + 1]. Case 2: require v >= theta/2 on
 * B_{R/2} x [t_bottom + 1/2, t_bottom + 1].
 */
inline TwoCaseReport two_case_oscillation_check(const GridFunction& u, const EquationParams& params,
                                                double R, double r, double theta,
                                                double t_bottom = 0.0, bool shift_first = false) {
    const auto& g = u.geometry();
    require(static_cast<int>(g.dim()) == params.d(), Errc::InvalidInput, "grid dimension differs from params.d");
    require(R > 0.0 && r >= 0.0 && theta > 0.0 && theta < 0.25, Errc::DomainError, "bad R, r or theta");
    const Point origin(g.dim(), 0.0);
    const SpaceTimeRegion outer{origin, R + r, t_bottom, t_bottom + 1.0};
    const auto v = shift_first ? shift_normalize(u, outer) : u;
    const auto ext = extremes_over(v, outer);
    require(ext.min >= -1e-12 && ext.max <= 1.0 + 1e-12, Errc::PreconditionFailed,
            "data must lie in [0, 1] on B_{R+r} x [0, 1]");

    const auto bottom = extremes_over(v, SpaceTimeRegion{origin, R, t_bottom, t_bottom});
    TwoCaseReport rep;
    rep.bottom_min = bottom.min;
    const double ns = static_cast<double>(g.nodes_per_slice());
    auto locate = [&](std::size_t lin) {
        const auto nsz = static_cast<std::size_t>(ns);
        rep.witness_x = g.coords_of(lin % nsz);
        rep.witness_t = g.time(lin / nsz);
    };
    if (bottom.min <= theta) {
        rep.which_case = 1;
        rep.bound = 1.0 - theta;
        const auto top = extremes_over(v, SpaceTimeRegion{origin, R, t_bottom + 0.5, t_bottom + 1.0});
        rep.witness = top.max;
        locate(top.argmax);
        rep.pass = top.max <= rep.bound;
    } else {
        rep.which_case = 2;
        rep.bound = 0.5 * theta;
        const auto top = extremes_over(v, SpaceTimeRegion{origin, 0.5 * R, t_bottom + 0.5, t_bottom + 1.0});
        rep.witness = top.min;
        locate(top.argmin);
        rep.pass = top.min >= rep.bound;
    }
    return rep;
}

}  // namespace hjholder
