/**
 * @file oscillation.hpp
 * @brief Oscillation decay on nested parabolic cylinders, the induction over
 *        scales, Hölder exponent fitting and two-point modulus checks.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "hjholder/core.hpp"

namespace hjholder {

struct OscillationLevel {
    std::size_t level = 0;
    double r = 0.0;
    double osc = 0.0;
    std::size_t nodes = 0;
};

struct OscillationSamples {
    std::vector<OscillationLevel> levels;
    std::size_t requested = 0;
    bool truncated = false;
    std::string truncation_reason;
    bool outer_inside_domain = true;
};

/// Time exponent of the intrinsic cylinders for a given spatial exponent.
inline double intrinsic_beta(double p, double alpha) { return p - alpha * (p - 1.0); }

/// Time exponent of the two-point modulus, alpha / (p - alpha (p-1)).
inline double modulus_time_exponent(double p, double alpha) {
    const double b = intrinsic_beta(p, alpha);
    require(b > 0.0, Errc::DomainError, "alpha must be below p' for the modulus time exponent");
    return alpha / b;
}

struct MeasureOptions {
    double r0 = 1.0;
    double floor_spacings = 4.0;  // stop once r_k < floor_spacings * max spacing
    std::size_t min_nodes = 2;
};

/**
 * osc_k over Q_{r0 lambda^k}(center, top_t) for k = 0..K-1. Levels are
 * truncated (and the truncation reported) once the radius falls below the
 * noise floor or the cylinder holds fewer than min_nodes nodes.
 */
inline OscillationSamples measure_oscillations(const GridFunction& u, const Point& center, double top_t,
                                               double lambda, double beta, std::size_t K,
                                               const MeasureOptions& opt = {}) {
    require(lambda > 0.0 && lambda < 1.0, Errc::DomainError, "lambda must lie in (0, 1)");
    require(beta > 0.0, Errc::DomainError, "beta must be > 0");
    const auto& g = u.geometry();
    require(center.size() == g.dim(), Errc::InvalidInput, "center dimension mismatch");
    double h = 0.0;
    for (double s : g.spacing()) h = std::max(h, s);

    OscillationSamples out;
    out.requested = K;
    const ParabolicCylinder q0(center, top_t, opt.r0, beta);
    for (std::size_t a = 0; a < g.dim(); ++a) {
        const double hi = g.coord(a, g.extent()[a] - 1);
        if (center[a] - opt.r0 < g.origin()[a] - 1e-12 || center[a] + opt.r0 > hi + 1e-12)
            out.outer_inside_domain = false;
    }
    if (q0.bottom_t() < g.t0() - 1e-12 || top_t > g.time(g.nt() - 1) + 1e-12) out.outer_inside_domain = false;

    double r = opt.r0;
    for (std::size_t k = 0; k < K; ++k, r *= lambda) {
        if (k > 0 && r < opt.floor_spacings * h) {
            out.truncated = true;
            out.truncation_reason = "radius below " + std::to_string(opt.floor_spacings) + " grid spacings";
            break;
        }
        const ParabolicCylinder q(center, top_t, r, beta);
        Extremes e;
        try {
            e = extremes_over(u, q.region());
        } catch (const Error&) {
            if (k == 0) throw;
            out.truncated = true;
            out.truncation_reason = "cylinder contains no grid node";
            break;
        }
        if (k > 0 && e.count < opt.min_nodes) {
            out.truncated = true;
            out.truncation_reason = "cylinder contains fewer than " + std::to_string(opt.min_nodes) + " nodes";
            break;
        }
        out.levels.push_back({k, r, e.max - e.min, e.count});
    }
    return out;
}

struct ImprovementLevel {
    std::size_t level = 0;
    double r = 0.0;
    double osc = 0.0;      // after renormalization
    double premise_bound = 0.0;
    bool premise = false;
    double conclusion_bound = 0.0;
    bool conclusion = true;  // vacuously true when the premise fails
};

struct ImprovementReport {
    bool pass = true;
    std::optional<std::size_t> first_failure;  // level k + 1 whose conclusion failed
    std::vector<ImprovementLevel> levels;
    std::size_t vacuous = 0;
    double scale = 1.0;  // factor applied to the measured oscillations
};

/**
 * Whenever osc_k <= r_k^alpha, require osc_{k+1} <= (lambda r_k)^alpha.
 * With renormalize, oscillations are first divided by osc_0 so that the outer
 * level has oscillation 1. A relative slack rel_tol absorbs rounding.
 */
inline ImprovementReport check_improvement(const OscillationSamples& samples, double alpha, double lambda,
                                           bool renormalize = true, double rel_tol = 1e-12) {
    ImprovementReport rep;
    const auto& lv = samples.levels;
    if (renormalize && !lv.empty() && lv.front().osc > 0.0) rep.scale = 1.0 / lv.front().osc;
    for (std::size_t k = 0; k < lv.size(); ++k) {
        ImprovementLevel row;
        row.level = lv[k].level;
        row.r = lv[k].r;
        row.osc = lv[k].osc * rep.scale;
        row.premise_bound = std::pow(lv[k].r, alpha);
        row.premise = row.osc <= row.premise_bound * (1.0 + rel_tol);
        if (k + 1 < lv.size()) {
            row.conclusion_bound = std::pow(lambda * lv[k].r, alpha);
            if (row.premise) {
                row.conclusion = lv[k + 1].osc * rep.scale <= row.conclusion_bound * (1.0 + rel_tol);
                if (!row.conclusion && rep.pass) {
                    rep.pass = false;
                    rep.first_failure = k + 1;
                }
            } else {
                ++rep.vacuous;
            }
        }
        rep.levels.push_back(row);
    }
    return rep;
}

/**
 * Least squares fit of log osc_k = alpha log r_k + log c over samples with
 * osc_k above floor. Throws DegenerateData with fewer than 3 usable samples.
 */
inline HolderEstimate fit_holder(const OscillationSamples& samples, double floor = 1e-12) {
    HolderEstimate est;
    std::vector<double> lx, ly;
    for (const auto& l : samples.levels) {
        est.samples.emplace_back(l.r, l.osc);
        if (l.osc > floor && l.r > 0.0) {
            lx.push_back(std::log(l.r));
            ly.push_back(std::log(l.osc));
        }
    }
    est.used = lx.size();
    require(lx.size() >= 3, Errc::DegenerateData, "fewer than 3 samples above the noise floor");
    const double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    require(sxx > 0.0, Errc::DegenerateData, "radii must be distinct");
    est.alpha_hat = sxy / sxx;
    const double intercept = my - est.alpha_hat * mx;
    est.c_hat = std::exp(intercept);
    est.max_fit_residual = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i)
        est.max_fit_residual = std::max(est.max_fit_residual, std::abs(ly[i] - (intercept + est.alpha_hat * lx[i])));
    return est;
}

/// Fit with the floor raised to the grid resolution: osc_0 * (h / r_0).
inline HolderEstimate fit_holder_resolved(const OscillationSamples& samples, double grid_floor) {
    return fit_holder(samples, 1e-12 + grid_floor);
}

struct ModulusReport {
    double alpha = 0.0;
    double time_exponent = 0.0;
    double C = 0.0;
    double max_ratio = 0.0;
    bool pass = true;
    Point x1, x2;
    double t1 = 0.0, t2 = 0.0;
    std::size_t pairs = 0;
    std::uint64_t seed = 0;
};

struct ModulusOptions {
    std::size_t random_pairs = 100'000;
    std::uint64_t seed = 20240917;
    std::optional<SpaceTimeRegion> region;  // restrict both points; default: whole grid
    double min_separation = 0.0;            // skip pairs closer than this in space and time
    double tol = 1e-12;
};

/**
 * max |u(x,t) - u(y,s)| / (C [|x-y|^alpha + |t-s|^{alpha/(p - alpha(p-1))}])
 * over a seeded random sample of node pairs plus all nearest-neighbor pairs.
 */
inline ModulusReport holder_modulus_check(const GridFunction& u, double alpha, double C, double p,
                                          const ModulusOptions& opt = {}) {
    require(alpha > 0.0 && C > 0.0, Errc::DomainError, "alpha and C must be > 0");
    ModulusReport rep;
    rep.alpha = alpha;
    rep.C = C;
    rep.seed = opt.seed;
    rep.time_exponent = modulus_time_exponent(p, alpha);
    const auto& g = u.geometry();
    const std::size_t d = g.dim();
    const std::size_t ns = g.nodes_per_slice();

    std::vector<std::size_t> nodes;
    if (opt.region) {
        for_each_node_in(u, *opt.region, [&](std::size_t s, std::size_t k, std::span<const double>, double) {
            nodes.push_back(k * ns + s);
        });
    } else {
        nodes.resize(g.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = i;
    }
    if (nodes.size() < 2) return rep;
    std::vector<char> member;
    if (opt.region) {
        member.assign(g.size(), 0);
        for (auto n : nodes) member[n] = 1;
    }

    std::vector<std::vector<double>> xs(ns);
    for (std::size_t s = 0; s < ns; ++s) xs[s] = g.coords_of(s);

    auto consider = [&](std::size_t i, std::size_t j) {
        const std::size_t si = i % ns, ki = i / ns, sj = j % ns, kj = j / ns;
        double dx2 = 0.0;
        for (std::size_t a = 0; a < d; ++a) dx2 += (xs[si][a] - xs[sj][a]) * (xs[si][a] - xs[sj][a]);
        const double dx = std::sqrt(dx2);
        const double dt = std::abs(g.time(ki) - g.time(kj));
        if (dx == 0.0 && dt == 0.0) return;
        if (opt.min_separation > 0.0 && dx < opt.min_separation && dt < opt.min_separation) return;
        const double bound = C * (std::pow(dx, alpha) + std::pow(dt, rep.time_exponent));
        const double ratio = std::abs(u.at(i) - u.at(j)) / bound;
        ++rep.pairs;
        if (ratio > rep.max_ratio) {
            rep.max_ratio = ratio;
            rep.x1 = xs[si];
            rep.x2 = xs[sj];
            rep.t1 = g.time(ki);
            rep.t2 = g.time(kj);
        }
    };

    std::mt19937_64 rng(opt.seed);
    const auto n = static_cast<std::uint64_t>(nodes.size());
    for (std::size_t r = 0; r < opt.random_pairs; ++r) {
        const auto i = nodes[static_cast<std::size_t>(rng() % n)];
        const auto j = nodes[static_cast<std::size_t>(rng() % n)];
        consider(i, j);
    }
    std::vector<std::size_t> idx(d);
    for (auto i : nodes) {
        const std::size_t s = i % ns, k = i / ns;
        g.unravel(s, idx);
        std::size_t stride = 1;
        for (std::size_t a = 0; a < d; ++a) {
            if (idx[a] + 1 < g.extent()[a] && (member.empty() || member[i + stride])) consider(i, i + stride);
            stride *= g.extent()[a];
        }
        if (k + 1 < g.nt() && (member.empty() || member[i + ns])) consider(i, i + ns);
    }
    rep.pass = rep.max_ratio <= 1.0 + opt.tol;
    return rep;
}

struct ScaleIterationConfig {
    double lambda = 0.5;
    double theta = 0.1;
    double alpha = 0.1;
    std::optional<double> beta;  // default p - alpha (p-1)
    double r0 = 1.0;
    std::size_t max_levels = 64;
    double floor_spacings = 4.0;
    bool check_selection_rule = true;  // require lambda^alpha >= 1 - theta
    double rel_tol = 1e-12;
};

struct ScaleIterationLevel {
    std::size_t level = 0;
    double r = 0.0;
    double osc = 0.0;    // normalized
    double bound = 0.0;  // r^alpha
    bool pass = true;
};

struct ScaleIterationReport {
    Point center;
    double top_t = 0.0;
    double beta = 0.0;
    double normalization = 1.0;  // measured outer oscillation
    std::vector<ScaleIterationLevel> levels;
    bool pass = true;
    std::optional<std::size_t> first_failure;
    bool truncated = false;
    std::string truncation_reason;
    std::size_t requested_levels = 0;
    double holder_constant = std::numeric_limits<double>::quiet_NaN();  // lambda^{-alpha} on full pass
};

/**
 * The induction over scales on measured data: renormalize u to oscillation 1
 * on the outer cylinder, then verify osc over Q_{r_k} <= r_k^alpha at every
 * resolvable level. Throws PreconditionFailed if lambda^alpha < 1 - theta.
 */
inline ScaleIterationReport iterate_scales(const GridFunction& u, const EquationParams& params, const Point& center,
                                           double top_t, const ScaleIterationConfig& cfg) {
    require(cfg.lambda > 0.0 && cfg.lambda < 1.0, Errc::DomainError, "lambda must lie in (0, 1)");
    require(cfg.theta > 0.0 && cfg.theta < 1.0, Errc::DomainError, "theta must lie in (0, 1)");
    require(cfg.alpha > 0.0, Errc::DomainError, "alpha must be > 0");
    if (cfg.check_selection_rule && std::pow(cfg.lambda, cfg.alpha) < 1.0 - cfg.theta)
        raise(Errc::PreconditionFailed, "lambda^alpha < 1 - theta");
    ScaleIterationReport rep;
    rep.center = center;
    rep.top_t = top_t;
    rep.beta = cfg.beta.value_or(intrinsic_beta(params.p(), cfg.alpha));
    MeasureOptions mo;
    mo.r0 = cfg.r0;
    mo.floor_spacings = cfg.floor_spacings;
    const auto s = measure_oscillations(u, center, top_t, cfg.lambda, rep.beta, cfg.max_levels, mo);
    rep.truncated = s.truncated;
    rep.truncation_reason = s.truncation_reason;
    rep.requested_levels = cfg.max_levels;
    rep.normalization = s.levels.front().osc;
    const double scale = rep.normalization > 0.0 ? 1.0 / rep.normalization : 1.0;
    for (const auto& l : s.levels) {
        ScaleIterationLevel row{l.level, l.r, l.osc * scale, std::pow(l.r / cfg.r0, cfg.alpha), true};
        row.pass = row.osc <= row.bound * (1.0 + cfg.rel_tol);
        if (!row.pass && rep.pass) {
            rep.pass = false;
            rep.first_failure = l.level;
        }
        rep.levels.push_back(row);
    }
    if (rep.pass) rep.holder_constant = std::pow(cfg.lambda, -cfg.alpha);
    return rep;
}

/// Centers of a coarse sub-grid: n per axis over [lo, hi]^d.
inline std::vector<Point> coarse_centers(std::size_t d, double lo, double hi, std::size_t n) {
    require(n >= 1, Errc::InvalidInput, "need >= 1 center per axis");
    std::vector<Point> out;
    std::vector<std::size_t> idx(d, 0);
    while (true) {
        Point c(d);
        for (std::size_t a = 0; a < d; ++a)
            c[a] = n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * static_cast<double>(idx[a]) / static_cast<double>(n - 1);
        out.push_back(std::move(c));
        std::size_t a = 0;
        for (; a < d; ++a) {
            if (++idx[a] < n) break;
            idx[a] = 0;
        }
        if (a == d) break;
    }
    return out;
}

struct FamilyReport {
    std::vector<ScaleIterationReport> runs;
    bool pass = true;
    std::size_t failures = 0;
};

/// iterate_scales over a finite family of centers sharing one top time.
inline FamilyReport iterate_scales_family(const GridFunction& u, const EquationParams& params,
                                          const std::vector<Point>& centers, double top_t,
                                          const ScaleIterationConfig& cfg) {
    FamilyReport rep;
    for (const auto& c : centers) {
        rep.runs.push_back(iterate_scales(u, params, c, top_t, cfg));
        if (!rep.runs.back().pass) {
            rep.pass = false;
            ++rep.failures;
        }
    }
    return rep;
}

struct AlphaSweepRow {
    double alpha = 0.0;
    double time_exponent = 0.0;
    double C = 0.0;
    double max_ratio = 0.0;
    bool pass = false;
};

struct AlphaSweepReport {
    std::vector<AlphaSweepRow> rows;
    std::optional<double> best_alpha;
};

/**
 * alpha = 0.05, 0.10, ... up to min(p', 1): runs the scale induction (without
 * the selection rule) with beta recomputed per alpha, plus the two-point
 * modulus with C = lambda^{-alpha} on u renormalized over the outer cylinder.
 */
inline AlphaSweepReport alpha_sweep(const GridFunction& u, const EquationParams& params, const Point& center,
                                    double top_t, double lambda, const ModulusOptions& mod = {},
                                    double step = 0.05) {
    AlphaSweepReport rep;
    const double top = std::min(params.p_prime(), 1.0);
    for (int i = 1;; ++i) {
        const double alpha = step * i;
        if (alpha > top + 1e-12 || intrinsic_beta(params.p(), alpha) <= 0.0) break;
        ScaleIterationConfig cfg;
        cfg.lambda = lambda;
        cfg.alpha = alpha;
        cfg.check_selection_rule = false;
        const auto it = iterate_scales(u, params, center, top_t, cfg);
        AlphaSweepRow row;
        row.alpha = alpha;
        row.time_exponent = alpha < params.p_prime() ? modulus_time_exponent(params.p(), alpha)
                                                     : std::numeric_limits<double>::infinity();
        row.C = std::pow(lambda, -alpha);
        if (std::isfinite(row.time_exponent)) {
            const ParabolicCylinder outer(center, top_t, cfg.r0, it.beta);
            const double sc = it.normalization > 0.0 ? 1.0 / it.normalization : 1.0;
            ModulusOptions mo = mod;
            mo.region = outer.region();
            row.max_ratio = holder_modulus_check(u.map([sc](double v) { return v * sc; }), alpha, row.C,
                                                 params.p(), mo).max_ratio;
        }
        row.pass = it.pass;
        if (row.pass) rep.best_alpha = alpha;
        rep.rows.push_back(row);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline void write_levels_csv(std::ostream& os, const ScaleIterationReport& rep) {
    os << "level,r,osc,bound,pass\n" << std::setprecision(17);
    for (const auto& l : rep.levels)
        os << l.level << ',' << l.r << ',' << l.osc << ',' << l.bound << ',' << (l.pass ? 1 : 0) << '\n';
}

inline void write_sweep_csv(std::ostream& os, const AlphaSweepReport& rep) {
    os << "alpha,time_exponent,C,max_ratio\n" << std::setprecision(17);
    for (const auto& r : rep.rows)
        os << r.alpha << ',' << r.time_exponent << ',' << r.C << ',' << r.max_ratio << '\n';
}

}  // namespace hjholder
