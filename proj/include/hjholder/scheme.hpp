/**
 * @file scheme.hpp
 * @brief Explicit monotone finite differences for
 *
 *   u_t + a(x,t)|Du|^p - Diff(x,t,D^2u) + shift = f(x,t),
 *
 * with a Lax-Friedrichs numerical Hamiltonian for the gradient term and
 * centered second differences for the diffusion, which is either absent,
 * eps m^+(D^2u), eps m^-(D^2u), or tr(B(x,t) D^2u). Supports d in {1, 2}.
 *
 * Also: discrete residuals of computed grids, comparison checks on parabolic
 * cylinders, and L^m norms of forcing terms.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hjholder/core.hpp"
#include "hjholder/extremal.hpp"

namespace hjholder {

using SpaceTimeFn = std::function<double(std::span<const double>, double)>;
using SpaceFn = std::function<double(std::span<const double>)>;
using MatrixFn = std::function<SymMatrix(std::span<const double>, double)>;

enum class DiffusionKind { None, ExtremalPlus, ExtremalMinus, Trace };

struct HamiltonianSpec {
    double p = 2.0;
    double A = 1.0;              // sandwich constant: a(x,t) must lie in [1/A, A]
    SpaceTimeFn grad_coeff;      // a(x,t); empty means a == 1
    bool gradient_term = true;   // false drops a|Du|^p entirely (pure diffusion)
    DiffusionKind diffusion = DiffusionKind::None;
    double diffusion_eps = 0.0;  // eps for the extremal forms
    MatrixFn B;                  // trace form; symmetric nonnegative
    SpaceTimeFn forcing;         // f(x,t); empty means 0
    double shift = 0.0;
    bool forcing_time_independent = false;
    bool grad_coeff_time_independent = false;

    void validate() const {
        require(std::isfinite(p) && p > 1.0, Errc::DomainError, "p must be > 1");
        require(std::isfinite(A) && A >= 1.0, Errc::DomainError, "sandwich constant A must be >= 1");
        require(diffusion_eps >= 0.0, Errc::DomainError, "diffusion eps must be >= 0");
        require(diffusion != DiffusionKind::Trace || static_cast<bool>(B), Errc::InvalidInput,
                "trace diffusion needs a B(x,t) callable");
    }
};

struct SolveConfig {
    GridGeometry grid;        // output lattice; internal steps are adaptive
    double cfl = 0.45;        // in (0, 1)
    double lf_cap = 1e8;      // cap on the Lax-Friedrichs coefficient
    double lf_safety = 1.0;   // multiplier >= 1 on the observed max |dH/dq|
    double lf_floor = 0.0;    // lower bound on the coefficient; a common floor makes two runs use one scheme
    double dt_floor = 1e-9;
    std::size_t max_steps = 50'000'000;
};

struct SolveStats {
    std::size_t steps = 0;
    double min_dt = std::numeric_limits<double>::infinity();
    double max_alpha = 0.0;
    std::size_t capped_steps = 0;
    std::vector<std::string> warnings;
};

struct SolveResult {
    GridFunction u;
    SolveStats stats;
};

// ---------------------------------------------------------------------------
// Coefficient families
// ---------------------------------------------------------------------------

/// a(x,t) = 1 + amplitude sin(k x_0) sin(omega t); lies in [1/A, A] for A >= 1/(1 - amplitude).
inline SpaceTimeFn rough_coefficient(double k, double omega, double amplitude = 0.5) {
    return [=](std::span<const double> x, double t) {
        return 1.0 + amplitude * std::sin(k * x[0]) * std::sin(omega * t);
    };
}

/// f(x) = M |x - x0|^{-gamma}, with |x - x0| floored at floor_radius (grid scale truncation).
inline SpaceTimeFn singular_forcing(double M, double gamma, Point x0, double floor_radius) {
    return [=, x0 = std::move(x0)](std::span<const double> x, double) {
        double r2 = 0.0;
        for (std::size_t a = 0; a < x.size(); ++a) r2 += (x[a] - x0[a]) * (x[a] - x0[a]);
        return M * std::pow(std::max(std::sqrt(r2), floor_radius), -gamma);
    };
}

namespace detail {

/// Spatial stencil helper over one time slice.
class Stencil {
public:
    explicit Stencil(const GridGeometry& g) : g_(g), d_(g.dim()), stride_(d_) {
        std::size_t s = 1;
        for (std::size_t a = 0; a < d_; ++a) {
            stride_[a] = s;
            s *= g.extent()[a];
        }
    }

    bool interior(std::span<const std::size_t> idx) const {
        for (std::size_t a = 0; a < d_; ++a)
            if (idx[a] == 0 || idx[a] + 1 >= g_.extent()[a]) return false;
        return true;
    }

    std::size_t stride(std::size_t a) const { return stride_[a]; }

    /// One-sided differences along axis a at spatial index s.
    void one_sided(std::span<const double> u, std::size_t s, std::size_t a, double& qm, double& qp) const {
        const double h = g_.spacing()[a];
        qm = (u[s] - u[s - stride_[a]]) / h;
        qp = (u[s + stride_[a]] - u[s]) / h;
    }

    SymMatrix hessian(std::span<const double> u, std::size_t s) const {
        SymMatrix H(d_);
        for (std::size_t a = 0; a < d_; ++a) {
            const double h = g_.spacing()[a];
            const std::size_t st = stride_[a];
            H.set(a, a, (u[s + st] - 2.0 * u[s] + u[s - st]) / (h * h));
            for (std::size_t b = a + 1; b < d_; ++b) {
                const double hb = g_.spacing()[b];
                const std::size_t sb = stride_[b];
                const double v = (u[s + st + sb] - u[s + st - sb] - u[s - st + sb] + u[s - st - sb]) /
                                 (4.0 * h * hb);
                H.set(a, b, v);
            }
        }
        return H;
    }

private:
    const GridGeometry& g_;
    std::size_t d_;
    std::vector<std::size_t> stride_;
};

inline double diffusion_term(const HamiltonianSpec& spec, const SymMatrix& hess,
                             std::span<const double> x, double t) {
    switch (spec.diffusion) {
        case DiffusionKind::None: return 0.0;
        case DiffusionKind::ExtremalPlus: return spec.diffusion_eps * m_plus(hess);
        case DiffusionKind::ExtremalMinus: return spec.diffusion_eps * m_minus(hess);
        case DiffusionKind::Trace: {
            const SymMatrix B = spec.B(x, t);
            double tr = 0.0;
            for (std::size_t i = 0; i < hess.dim(); ++i)
                for (std::size_t j = 0; j < hess.dim(); ++j) tr += B(i, j) * hess(i, j);
            return tr;
        }
    }
    return 0.0;
}

inline double grad_coeff_at(const HamiltonianSpec& spec, std::span<const double> x, double t) {
    if (!spec.gradient_term) return 0.0;
    if (!spec.grad_coeff) return 1.0;
    const double a = spec.grad_coeff(x, t);
    const double tol = 1e-12;
    require(a >= 1.0 / spec.A - tol && a <= spec.A + tol, Errc::DomainError,
            "gradient coefficient leaves [1/A, A]");
    return a;
}

inline double forcing_at(const HamiltonianSpec& spec, std::span<const double> x, double t) {
    return spec.forcing ? spec.forcing(x, t) : 0.0;
}

}  // namespace detail

/**
 * Explicit time stepping on cfg.grid. Each internal step uses the global
 * Lax-Friedrichs coefficient alpha = lf_safety * max a * p * G^{p-1}, where G is
 * the largest gradient magnitude seen through one-sided differences, and
 *
 *   dt = cfl / (sum_a 2 alpha / h_a + sum_a 2 Lambda / h_a^2),
 *
 * which keeps every stencil weight of the monotone part nonnegative. Boundary
 * nodes of the box follow the Dirichlet data bc(x, t).
 */
inline SolveResult solve_hj(const HamiltonianSpec& spec, const SpaceFn& init, const SpaceTimeFn& bc,
                            const SolveConfig& cfg) {
    spec.validate();
    const auto& g = cfg.grid;
    const std::size_t d = g.dim();
    require(d == 1 || d == 2, Errc::DomainError, "solve_hj supports d in {1, 2}");
    require(cfg.cfl > 0.0 && cfg.cfl < 1.0, Errc::InvalidInput, "CFL factor must lie in (0, 1)");
    require(cfg.lf_safety >= 1.0, Errc::InvalidInput, "lf_safety must be >= 1");
    require(cfg.lf_floor >= 0.0, Errc::InvalidInput, "lf_floor must be >= 0");
    for (std::size_t a = 0; a < d; ++a)
        require(g.extent()[a] >= 3, Errc::GridTooSmall, "need >= 3 nodes per axis");

    const std::size_t ns = g.nodes_per_slice();
    detail::Stencil st(g);
    std::vector<Point> xs(ns);
    std::vector<std::vector<std::size_t>> ids(ns, std::vector<std::size_t>(d));
    std::vector<char> inner(ns);
    for (std::size_t s = 0; s < ns; ++s) {
        g.unravel(s, ids[s]);
        xs[s].resize(d);
        g.coords(ids[s], xs[s]);
        inner[s] = st.interior(ids[s]) ? 1 : 0;
    }

    std::vector<double> out(g.size());
    std::vector<double> cur(ns), next(ns);
    double data_bound = 0.0;
    for (std::size_t s = 0; s < ns; ++s) {
        cur[s] = inner[s] ? init(xs[s]) : bc(xs[s], g.t0());
        require(std::isfinite(cur[s]), Errc::InvalidInput, "initial data must be finite");
        data_bound = std::max(data_bound, std::abs(cur[s]));
    }
    std::copy(cur.begin(), cur.end(), out.begin());

    // Diffusion size for the step restriction.
    auto lambda_max_at = [&](double t) {
        switch (spec.diffusion) {
            case DiffusionKind::None: return 0.0;
            case DiffusionKind::ExtremalPlus:
            case DiffusionKind::ExtremalMinus: return spec.diffusion_eps;
            case DiffusionKind::Trace: {
                double lam = 0.0;
                for (std::size_t s = 0; s < ns; ++s) {
                    if (!inner[s]) continue;
                    const SymMatrix B = spec.B(xs[s], t);
                    require(lambda_min(B) >= -1e-12, Errc::DomainError, "B(x,t) must be nonnegative definite");
                    for (std::size_t i = 0; i < d; ++i) lam = std::max(lam, B(i, i));
                }
                return lam;
            }
        }
        return 0.0;
    };

    std::vector<double> coeff(ns, 1.0), force(ns, 0.0);
    auto refresh_coeffs = [&](double t, bool first) {
        if (first || !spec.grad_coeff_time_independent)
            for (std::size_t s = 0; s < ns; ++s) coeff[s] = inner[s] ? detail::grad_coeff_at(spec, xs[s], t) : 1.0;
        if (first || !spec.forcing_time_independent)
            for (std::size_t s = 0; s < ns; ++s) force[s] = inner[s] ? detail::forcing_at(spec, xs[s], t) : 0.0;
    };

    SolveStats stats;
    double t = g.t0();
    bool first = true;
    for (std::size_t k = 1; k < g.nt(); ++k) {
        const double t_target = g.time(k);
        while (t < t_target) {
            refresh_coeffs(t, first);
            first = false;
            double G = 0.0, amax = 0.0;
            for (std::size_t s = 0; s < ns; ++s) {
                if (!inner[s]) continue;
                double g2 = 0.0;
                for (std::size_t a = 0; a < d; ++a) {
                    double qm, qp;
                    st.one_sided(cur, s, a, qm, qp);
                    const double q = std::max(std::abs(qm), std::abs(qp));
                    g2 += q * q;
                }
                G = std::max(G, std::sqrt(g2));
                amax = std::max(amax, coeff[s]);
            }
            double alpha = std::max(cfg.lf_floor, cfg.lf_safety * amax * spec.p * std::pow(G, spec.p - 1.0));
            if (alpha > cfg.lf_cap) {
                alpha = cfg.lf_cap;
                if (stats.capped_steps++ == 0)
                    stats.warnings.push_back("Lax-Friedrichs coefficient capped at t=" + std::to_string(t) +
                                             "; scheme may leave its monotone regime");
            }
            stats.max_alpha = std::max(stats.max_alpha, alpha);
            const double lam = lambda_max_at(t);
            double rate = 0.0;
            for (std::size_t a = 0; a < d; ++a) {
                const double h = g.spacing()[a];
                rate += 2.0 * alpha / h + 2.0 * lam / (h * h);
            }
            double dt = rate > 0.0 ? cfg.cfl / rate : t_target - t;
            const bool last = dt >= t_target - t;
            if (last) dt = t_target - t;
            else if (dt < cfg.dt_floor)
                raise(Errc::CflViolation, "time step fell below the floor at t=" + std::to_string(t));
            require(++stats.steps <= cfg.max_steps, Errc::CflViolation, "step budget exhausted");
            stats.min_dt = std::min(stats.min_dt, dt);

            const double t_new = last ? t_target : t + dt;
            for (std::size_t s = 0; s < ns; ++s) {
                if (!inner[s]) {
                    next[s] = bc(xs[s], t_new);
                    continue;
                }
                double grad2 = 0.0, lf = 0.0;
                for (std::size_t a = 0; a < d; ++a) {
                    double qm, qp;
                    st.one_sided(cur, s, a, qm, qp);
                    const double qc = 0.5 * (qm + qp);
                    grad2 += qc * qc;
                    lf += 0.5 * alpha * (qp - qm);
                }
                const double ham = coeff[s] * std::pow(std::sqrt(grad2), spec.p);
                double diff = 0.0;
                if (spec.diffusion != DiffusionKind::None)
                    diff = detail::diffusion_term(spec, st.hessian(cur, s), xs[s], t);
                next[s] = cur[s] - dt * (ham - lf - diff + spec.shift - force[s]);
            }
            double bound = 0.0;
            for (std::size_t s = 0; s < ns; ++s) bound = std::max(bound, std::abs(next[s]));
            if (!(bound <= 1e3 * (1.0 + data_bound)))
                raise(Errc::Blowup, "solution exceeded 1e3 (1 + data bound) at t=" + std::to_string(t_new));
            std::swap(cur, next);
            t = t_new;
        }
        t = t_target;
        std::copy(cur.begin(), cur.end(), out.begin() + static_cast<std::ptrdiff_t>(k * ns));
    }
    return {GridFunction(g, std::move(out)), std::move(stats)};
}

// ---------------------------------------------------------------------------
// Discrete residual
// ---------------------------------------------------------------------------

enum class ResidualSide { Sub, Super };

struct ResidualReport {
    ResidualSide side = ResidualSide::Sub;
    double worst = 0.0;      // max residual (sub) or min residual (super)
    double violation = 0.0;  // max(worst, 0) for sub, max(-worst, 0) for super
    Point x;
    double t = 0.0;
    std::size_t nodes = 0;
};

/**
 * R = (u^{k+1} - u^k)/dt + a|Du^k|^p - Diff(D^2u^k) + shift - f at interior
 * nodes, centered space differences. The sub side reports max R (should be
 * <= 0), the super side min R (should be >= 0). A grid surrogate of the
 * viscosity inequalities, not an equivalent.
 */
inline ResidualReport discrete_residual(const GridFunction& u, const HamiltonianSpec& spec, ResidualSide side) {
    spec.validate();
    const auto& g = u.geometry();
    const std::size_t d = g.dim();
    for (std::size_t a = 0; a < d; ++a)
        require(g.extent()[a] >= 3, Errc::GridTooSmall, "need >= 3 nodes per axis");
    require(g.nt() >= 2, Errc::GridTooSmall, "need >= 2 time levels");
    const std::size_t ns = g.nodes_per_slice();
    detail::Stencil st(g);
    ResidualReport rep;
    rep.side = side;
    rep.worst = side == ResidualSide::Sub ? -std::numeric_limits<double>::infinity()
                                          : std::numeric_limits<double>::infinity();
    std::vector<std::size_t> idx(d);
    Point x(d);
    for (std::size_t k = 0; k + 1 < g.nt(); ++k) {
        const double t = g.time(k);
        const auto cur = u.slice(k);
        const auto nxt = u.slice(k + 1);
        for (std::size_t s = 0; s < ns; ++s) {
            g.unravel(s, idx);
            if (!st.interior(idx)) continue;
            g.coords(idx, x);
            double grad2 = 0.0;
            for (std::size_t a = 0; a < d; ++a) {
                double qm, qp;
                st.one_sided(cur, s, a, qm, qp);
                const double qc = 0.5 * (qm + qp);
                grad2 += qc * qc;
            }
            const double a_val = detail::grad_coeff_at(spec, x, t);
            double diff = 0.0;
            if (spec.diffusion != DiffusionKind::None) diff = detail::diffusion_term(spec, st.hessian(cur, s), x, t);
            const double R = (nxt[s] - cur[s]) / g.dt() + a_val * std::pow(std::sqrt(grad2), spec.p) - diff +
                             spec.shift - detail::forcing_at(spec, x, t);
            ++rep.nodes;
            const bool worse = side == ResidualSide::Sub ? R > rep.worst : R < rep.worst;
            if (worse) {
                rep.worst = R;
                rep.x = x;
                rep.t = t;
            }
        }
    }
    rep.violation = side == ResidualSide::Sub ? std::max(rep.worst, 0.0) : std::max(-rep.worst, 0.0);
    return rep;
}

// ---------------------------------------------------------------------------
// Comparison check
// ---------------------------------------------------------------------------

struct ComparisonReport {
    double boundary_excess = 0.0;  // max(lower - upper) on the parabolic boundary nodes
    double interior_excess = 0.0;  // max(lower - upper) on the remaining nodes of the region
    Point x;
    double t = 0.0;
    std::size_t boundary_nodes = 0;
    std::size_t interior_nodes = 0;
};

/**
 * Parabolic boundary nodes of the region: nodes on its lowest time level plus
 * nodes with an axis neighbor outside the ball or outside the grid. Throws
 * BoundaryOrderingFailed if lower > upper + boundary_tol there.
 */
inline ComparisonReport comparison_check(const GridFunction& lower, const GridFunction& upper,
                                         const SpaceTimeRegion& q, double boundary_tol = 0.0) {
    const auto& g = lower.geometry();
    require(g.same_lattice(upper.geometry()), Errc::InvalidInput, "comparison needs identical lattices");
    const std::size_t d = g.dim();
    const std::size_t ns = g.nodes_per_slice();
    const auto range = g.time_range(q.t_lo, q.t_hi);
    const auto k_lo = range.first, k_hi = range.second;
    require(k_lo <= k_hi, Errc::EmptyIntersection, "region misses every time level");

    std::vector<char> in_ball(ns, 0);
    for_each_spatial_node_in_ball(g, q.center, q.radius,
                                  [&](std::size_t s, std::span<const double>) { in_ball[s] = 1; });
    detail::Stencil st(g);
    std::vector<std::size_t> idx(d);
    ComparisonReport rep;
    rep.boundary_excess = -std::numeric_limits<double>::infinity();
    rep.interior_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < ns; ++s) {
        if (!in_ball[s]) continue;
        g.unravel(s, idx);
        bool lateral = !st.interior(idx);
        for (std::size_t a = 0; a < d && !lateral; ++a)
            lateral = !in_ball[s - st.stride(a)] || !in_ball[s + st.stride(a)];
        for (auto k = k_lo; k <= k_hi; ++k) {
            const auto kk = static_cast<std::size_t>(k);
            const double ex = lower.at(kk * ns + s) - upper.at(kk * ns + s);
            if (lateral || k == k_lo) {
                ++rep.boundary_nodes;
                rep.boundary_excess = std::max(rep.boundary_excess, ex);
            } else {
                ++rep.interior_nodes;
                if (ex > rep.interior_excess) {
                    rep.interior_excess = ex;
                    rep.x = g.coords_of(s);
                    rep.t = g.time(kk);
                }
            }
        }
    }
    require(rep.boundary_nodes > 0, Errc::EmptyIntersection, "no grid node lies in the region");
    if (rep.boundary_excess > boundary_tol)
        raise(Errc::BoundaryOrderingFailed,
              "lower exceeds upper on the parabolic boundary by " + std::to_string(rep.boundary_excess));
    return rep;
}

// ---------------------------------------------------------------------------
// L^m norms
// ---------------------------------------------------------------------------

/// (sum over nodes in q of |f|^m * cell volume)^{1/m}.
inline double lm_norm(const GridFunction& f, double m, const SpaceTimeRegion& q) {
    require(m >= 1.0, Errc::DomainError, "m must be >= 1");
    const auto& g = f.geometry();
    double cell = g.dt();
    for (double h : g.spacing()) cell *= h;
    double sum = 0.0;
    std::size_t count = 0;
    for_each_node_in(f, q, [&](std::size_t, std::size_t, std::span<const double>, double v) {
        sum += std::pow(std::abs(v), m);
        ++count;
    });
    require(count > 0, Errc::EmptyIntersection, "no grid node lies in the region");
    return std::pow(sum * cell, 1.0 / m);
}

inline double lm_norm(const GridFunction& f, double m, const ParabolicCylinder& q) {
    return lm_norm(f, m, q.region());
}

/// Samples the callable on the lattice first.
inline double lm_norm(const SpaceTimeFn& f, const GridGeometry& g, double m, const SpaceTimeRegion& q) {
    return lm_norm(GridFunction::sample(g, f), m, q);
}

}  // namespace hjholder
