/**
 * @file scaling.hpp
 * @brief Coefficient bookkeeping for v(x,t) = c u(ax, bt) and the exponent
 *        arithmetic that selects alpha and beta.
 *
 * If u solves u_t + A|Du|^p - eps m(D^2u) = f then v solves
 *   v_t + A a^{-p} b c^{1-p} |Dv|^p - eps a^{-2} b m(D^2v) = b c f(ax, bt).
 */

#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hjholder/core.hpp"

namespace hjholder {

struct ScaleReport {
    double a = 1.0, b = 1.0, c = 1.0;
    double grad_coeff_factor = 1.0;  // a^{-p} b c^{1-p}
    double diff_coeff_factor = 1.0;  // a^{-2} b
    double rhs_factor = 1.0;         // b c
    double lm_factor = std::numeric_limits<double>::quiet_NaN();           // b c a^{-d/m} b^{-1/m}
    double lm_factor_exponent = std::numeric_limits<double>::quiet_NaN();  // p(1-1/m) - d/m
    double delta = std::numeric_limits<double>::quiet_NaN();               // at alpha = 0
    bool contracts_diffusion = false;  // diff factor <= 1
    bool contracts_rhs = false;        // rhs factor <= 1
};

/// p(1 - 1/m) - d/m: power of a in the L^m norm of b f(a., b.) when b = a^p.
inline double lm_scaling_exponent(double p, double m, double d) {
    require(m >= 1.0, Errc::DomainError, "m must be >= 1");
    return p * (1.0 - 1.0 / m) - d / m;
}

/// p(m-1) > d; equivalently m > 1 + d/p.
inline bool forcing_scales_down(double p, double m, double d) { return p * (m - 1.0) > d; }

/**
 * delta = (p(m-1) - d)/m + alpha ((m-1)p + 1)/m, as used for the Hölder
 * rescaling of L^m data.
 */
inline double delta_exponent(double p, double m, double d, double alpha) {
    require(m > 1.0, Errc::DomainError, "delta_exponent requires m > 1");
    return (p * (m - 1.0) - d) / m + alpha * ((m - 1.0) * p + 1.0) / m;
}

/**
 * Exponent of r in the L^m norm of the forcing of r^{-alpha} u(rx, r^beta t)
 * with beta = p - alpha(p-1), computed directly from the change of variables:
 *   (p(m-1) - d)/m - alpha ((m-1)p + 1)/m.
 */
inline double calpha_lm_exponent(double p, double m, double d, double alpha) {
    require(m >= 1.0, Errc::DomainError, "m must be >= 1");
    const double beta = p - alpha * (p - 1.0);
    return p * (1.0 - alpha) - d / m - beta / m;
}

inline ScaleReport transform_coeffs(double a, double b, double c, const EquationParams& params) {
    require(a > 0.0 && b > 0.0 && c > 0.0 && std::isfinite(a) && std::isfinite(b) && std::isfinite(c),
            Errc::DomainError, "scaling parameters must be positive");
    const double p = params.p();
    ScaleReport r;
    r.a = a;
    r.b = b;
    r.c = c;
    // divide by a^p rather than multiply by a^{-p}: b = a^p then gives exactly 1
    r.grad_coeff_factor = b * std::pow(c, 1.0 - p) / std::pow(a, p);
    r.diff_coeff_factor = b / (a * a);
    r.rhs_factor = b * c;
    r.contracts_diffusion = r.diff_coeff_factor <= 1.0;
    r.contracts_rhs = r.rhs_factor <= 1.0;
    if (params.m()) {
        const double m = *params.m();
        const double d = static_cast<double>(params.d());
        r.lm_factor = b * c * std::pow(a, -d / m) * std::pow(b, -1.0 / m);
        r.lm_factor_exponent = lm_scaling_exponent(p, m, d);
        if (m > 1.0) r.delta = delta_exponent(p, m, d, 0.0);
    }
    return r;
}

struct CalphaScaleReport {
    ScaleReport scale;
    double alpha = 0.0;
    double beta = 0.0;
    double diffusion_exponent = 0.0;  // p - 2 - alpha(p-1)
    double rhs_exponent = 0.0;        // p(1 - alpha)
    bool factors_at_most_one = false;
    bool alpha_below_diffusion_threshold = false;  // alpha < (p-2)/(p-1)
};

/// u_r(x,t) = r^{-alpha} u(rx, r^beta t) with beta = p - alpha(p-1).
inline CalphaScaleReport calpha_scale(double r, double alpha, const EquationParams& params) {
    require(r > 0.0 && r <= 1.0, Errc::DomainError, "r must lie in (0, 1]");
    require(alpha > 0.0 && alpha < 1.0, Errc::DomainError, "alpha must lie in (0, 1)");
    const double p = params.p();
    CalphaScaleReport out;
    out.alpha = alpha;
    out.beta = p - alpha * (p - 1.0);
    out.scale = transform_coeffs(r, std::pow(r, out.beta), std::pow(r, -alpha), params);
    out.diffusion_exponent = p - 2.0 - alpha * (p - 1.0);
    out.rhs_exponent = p * (1.0 - alpha);
    out.alpha_below_diffusion_threshold = p > 2.0 && alpha < (p - 2.0) / (p - 1.0);
    out.factors_at_most_one = out.scale.diff_coeff_factor <= 1.0 && out.scale.rhs_factor <= 1.0;
    return out;
}

struct AlphaConstraint {
    std::string name;
    double limit = 0.0;     // alpha must stay below (or at) this value
    bool strict = false;
};

struct AlphaChoice {
    double alpha = 0.0;
    std::vector<AlphaConstraint> active;
    std::string binding;
};

/**
 * Largest alpha on a grid of spacing resolution satisfying:
 *   alpha < p/(2(p-1)), alpha < 1, lambda^alpha >= 1 - theta,
 * and when m is given also alpha <= 1/2 and p(1 - alpha - 1/m) - d/m >= 0.
 * Throws Infeasible if no positive grid value qualifies.
 */
inline AlphaChoice admissible_alpha(double p, std::optional<double> m, double d, double lambda, double theta,
                                    double resolution = 1e-4) {
    require(p > 1.0, Errc::DomainError, "p must be > 1");
    require(lambda > 0.0 && lambda < 1.0, Errc::DomainError, "lambda must lie in (0, 1)");
    require(theta > 0.0 && theta < 1.0, Errc::DomainError, "theta must lie in (0, 1)");
    require(resolution > 0.0, Errc::InvalidInput, "resolution must be > 0");
    if (m) require(*m > 1.0, Errc::DomainError, "m must be > 1");

    AlphaChoice out;
    out.active.push_back({"alpha < p/(2(p-1))", p / (2.0 * (p - 1.0)), true});
    out.active.push_back({"alpha < 1", 1.0, true});
    out.active.push_back({"lambda^alpha >= 1 - theta", std::log(1.0 - theta) / std::log(lambda), false});
    if (m) {
        out.active.push_back({"alpha <= 1/2", 0.5, false});
        out.active.push_back({"p(1 - alpha - 1/m) - d/m >= 0", 1.0 - 1.0 / *m - d / (p * *m), false});
    }
    auto ok = [&](double a, std::string* failed) {
        auto fail = [&](const std::string& n) {
            if (failed) *failed = n;
            return false;
        };
        if (!(a < p / (2.0 * (p - 1.0)))) return fail(out.active[0].name);
        if (!(a < 1.0)) return fail(out.active[1].name);
        if (!(std::pow(lambda, a) >= 1.0 - theta)) return fail(out.active[2].name);
        if (m) {
            if (!(a <= 0.5)) return fail(out.active[3].name);
            if (!(p * (1.0 - a - 1.0 / *m) - d / *m >= 0.0)) return fail(out.active[4].name);
        }
        return true;
    };

    // All constraints are monotone in alpha: jump near the tightest limit, then walk.
    double tight = std::numeric_limits<double>::infinity();
    for (const auto& c : out.active) tight = std::min(tight, c.limit);
    auto k = static_cast<long long>(std::floor(std::max(tight, 0.0) / resolution)) + 2;
    std::string failed;
    while (k > 0 && !ok(static_cast<double>(k) * resolution, &failed)) --k;
    if (k <= 0) {
        ok(resolution, &failed);
        raise(Errc::Infeasible, "no positive alpha satisfies all constraints; binding: " + failed);
    }
    out.alpha = static_cast<double>(k) * resolution;
    ok(out.alpha + resolution, &out.binding);
    return out;
}

struct BetaWindow {
    double lower = 0.0;
    double upper = 0.0;
    bool nonempty = false;
};

/// (1/p, min(1/p', (m-1)/d)).
inline BetaWindow beta_window(double p, double m, double d) {
    require(p > 2.0, Errc::DomainError, "beta_window requires p > 2");
    require(m > 1.0, Errc::DomainError, "beta_window requires m > 1");
    require(d >= 1.0, Errc::DomainError, "d must be >= 1");
    BetaWindow w;
    w.lower = 1.0 / p;
    w.upper = std::min(1.0 - 1.0 / p, (m - 1.0) / d);
    w.nonempty = w.lower < w.upper;
    return w;
}

}  // namespace hjholder
