/**
 * @file experiments.hpp
 * @brief End-to-end experiments shared by the command line tool and the
 *        acceptance binary: comparison against the min-of-translates barrier,
 *        the two-case oscillation lemma on rough coefficients, and the scale
 *        induction on computed solutions.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hjholder/barriers.hpp"
#include "hjholder/oscillation.hpp"
#include "hjholder/scaling.hpp"
#include "hjholder/scheme.hpp"
#include "hjholder/semi_lax.hpp"

namespace hjholder::experiments {

/// Uniform double in [lo, hi) from raw 64-bit draws.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

/**
 * Seeded smooth data with values in [lo, hi]:
 *   lo + (hi - lo) (1 + sum_j c_j sin(k_j . x + phi_j) / sum_j |c_j|) / 2,
 * with |k_j| up to frequency (j + 1).
 */
inline SpaceFn random_smooth_data(std::uint64_t seed, std::size_t d, std::size_t modes, double lo, double hi,
                                  double frequency = 3.0) {
    require(modes >= 1, Errc::InvalidInput, "need >= 1 mode");
    std::mt19937_64 rng(seed);
    std::vector<double> c(modes), phi(modes), k(modes * d);
    double total = 0.0;
    for (std::size_t j = 0; j < modes; ++j) {
        c[j] = uniform(rng, -1.0, 1.0) / static_cast<double>(j + 1);
        phi[j] = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        for (std::size_t a = 0; a < d; ++a) k[j * d + a] = uniform(rng, -frequency, frequency) * static_cast<double>(j + 1);
        total += std::abs(c[j]);
    }
    return [=](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t j = 0; j < modes; ++j) {
            double arg = phi[j];
            for (std::size_t a = 0; a < d; ++a) arg += k[j * d + a] * x[a];
            s += c[j] * std::sin(arg);
        }
        return lo + (hi - lo) * 0.5 * (1.0 + s / total);
    };
}

struct RoughCoefficient {
    double k = 10.0;
    double omega = 7.0;
    double amp = 0.5;
};

// ---------------------------------------------------------------------------
// Constants shared by both halves of the oscillation lemma
// ---------------------------------------------------------------------------

struct LemmaConstants {
    double C = 0.0;       // supersolution constant
    double eps0 = 0.0;
    double eta = 0.0;
    double r = 0.0;       // (1/C)^{1/p'}
    double R = 0.0;       // from the upper-half bound
    double theta = 0.0;   // from the subsolution at this R
    double C_b = 0.0;
    double eps = 0.0;     // min(eta eps0 / 2, subsolution eps)
    double upper_bound = 0.0;  // theta + C 2^{1/(p-1)} ((2R)^2 + eta)^{p'/2} + eps, must be <= 1 - theta
};

/**
 * (C, eps0) at eta; R is the largest radius with
 * C 2^{1/(p-1)} ((2R)^2 + eta)^{p'/2} <= margin; theta and eps follow from the
 * subsolution at that R.
 */
inline LemmaConstants lemma_constants(const EquationParams& params, double eta, double margin = 0.45) {
    params.require_superquadratic();
    require(margin > 0.0 && margin < 0.5, Errc::DomainError, "margin must lie in (0, 1/2)");
    const double p = params.p(), pp = params.p_prime();
    LemmaConstants k;
    k.eta = eta;
    const auto sup = find_supersolution_constants(params, eta);
    k.C = sup.C;
    k.eps0 = sup.eps0;
    k.r = std::pow(1.0 / k.C, 1.0 / pp);
    const double s = std::pow(margin / (k.C * std::pow(2.0, 1.0 / (p - 1.0))), 2.0 / pp) - eta;
    require(s > 0.0, Errc::Infeasible, "eta too large for the upper-half bound; lower eta");
    k.R = 0.5 * std::sqrt(s);
    const auto sub = find_subsolution_constants(params, k.R);
    k.theta = sub.theta;
    k.C_b = sub.C_b;
    k.eps = std::min(0.5 * eta * k.eps0, sub.eps);
    k.upper_bound = k.theta + k.C * std::pow(2.0, 1.0 / (p - 1.0)) *
                                  std::pow(4.0 * k.R * k.R + eta, 0.5 * pp) + k.eps;
    return k;
}

inline HamiltonianSpec rough_spec(double p, double A, const RoughCoefficient& a, double diffusion_eps) {
    HamiltonianSpec spec;
    spec.p = p;
    spec.A = A;
    if (a.amp != 0.0) spec.grad_coeff = rough_coefficient(a.k, a.omega, a.amp);
    spec.grad_coeff_time_independent = a.amp == 0.0;
    spec.diffusion = diffusion_eps > 0.0 ? DiffusionKind::ExtremalPlus : DiffusionKind::None;
    spec.diffusion_eps = diffusion_eps;
    return spec;
}

// ---------------------------------------------------------------------------
// Comparison against the min-of-translates barrier
// ---------------------------------------------------------------------------

/**
 * u_t + a|Du|^p - eps_d m^+(D^2u) = f with a in [1/A, A], 0 <= f <= eps,
 * eps_d <= eps and data in [0, 1 - eps]: u is a subsolution of the barrier's
 * equation with u <= 1.
 */
struct ComparisonInstance {
    std::string name = "default";
    double p = 3.0;
    double A = 2.0;
    int d = 1;
    double eta = 0.1;
    double R = 0.3;               // target; snapped so that R + r is a lattice radius
    double h = 1.0 / 128.0;
    std::size_t nt = 65;
    RoughCoefficient coeff;
    std::uint64_t seed = 1;
    std::size_t modes = 4;
    double forcing_fraction = 0.5;   // f = fraction * eps * (1 + sin(3 x_0)) / 2
    double diffusion_fraction = 0.5;
};

struct ComparisonOutcome {
    double C = 0.0, eps0 = 0.0, eps = 0.0, r = 0.0, R = 0.0, h = 0.0;
    double tolerance = 0.0;        // max |u_h - u_{h/2}| on the cylinder
    double interior_excess = 0.0;  // max (u - V) over interior nodes
    double boundary_excess = 0.0;
    std::size_t interior_nodes = 0, boundary_nodes = 0;
    Point x;
    double t = 0.0;
    bool boundary_ok = true;
    bool pass = false;
    std::string note;
};

inline ComparisonOutcome run_comparison(const ComparisonInstance& in) {
    require(in.d == 1 || in.d == 2, Errc::InvalidInput, "comparison runs in d = 1 or 2");
    require(in.h > 0.0 && in.nt >= 3, Errc::InvalidInput, "bad grid");
    const EquationParams params(in.p, in.A, 0.0, in.d);
    ComparisonOutcome out;
    const auto sup = find_supersolution_constants(params, in.eta);
    out.C = sup.C;
    out.eps0 = sup.eps0;
    out.eps = 0.5 * in.eta * sup.eps0;
    out.r = std::pow(1.0 / out.C, 1.0 / params.p_prime());
    out.h = in.h;
    const auto K = static_cast<long>(std::lround((in.R + out.r) / in.h));
    out.R = static_cast<double>(K) * in.h - out.r;
    require(out.R > 0.0, Errc::InvalidInput, "R too small for this r and spacing");
    const double L = static_cast<double>(K + 4) * in.h;
    const auto n = static_cast<std::size_t>(2 * (K + 4) + 1);

    auto spec = rough_spec(in.p, in.A, in.coeff, in.diffusion_fraction * out.eps);
    const double fmax = in.forcing_fraction * out.eps;
    spec.forcing = [fmax](std::span<const double> x, double) { return fmax * 0.5 * (1.0 + std::sin(3.0 * x[0])); };
    spec.forcing_time_independent = true;
    const auto init = random_smooth_data(in.seed, static_cast<std::size_t>(in.d), in.modes, 0.0, 1.0 - out.eps);
    const auto bc = [&](std::span<const double> x, double) { return init(x); };

    const auto gc = GridGeometry::cube(in.d, -L, L, n, 0.0, 1.0, in.nt);
    const auto gf = GridGeometry::cube(in.d, -L, L, 2 * n - 1, 0.0, 1.0, in.nt);
    const auto u = solve_hj(spec, init, bc, SolveConfig{gc}).u;
    const auto uf = solve_hj(spec, init, bc, SolveConfig{gf}).u;

    const Point origin(static_cast<std::size_t>(in.d), 0.0);
    const SpaceTimeRegion cyl{origin, out.R + out.r + 0.5 * in.h, 0.0, 1.0};
    const std::size_t ns = gc.nodes_per_slice(), nsf = gf.nodes_per_slice();
    std::vector<std::size_t> idx(static_cast<std::size_t>(in.d)), fidx(idx.size());
    for_each_node_in(u, cyl, [&](std::size_t s, std::size_t k, std::span<const double>, double v) {
        gc.unravel(s, idx);
        for (std::size_t a = 0; a < idx.size(); ++a) fidx[a] = 2 * idx[a];
        const double vf = uf.at(k * nsf + gf.linear(fidx, 0));
        out.tolerance = std::max(out.tolerance, std::abs(v - vf));
    });

    // V = u on B_R x {0}, +infinity elsewhere at t = 0, min of translates for t > 0.
    const auto bottom = bottom_of(u, out.R);
    const auto sp = params.with_eps(out.eps);
    std::vector<double> vals(gc.size());
    for (std::size_t s = 0; s < ns; ++s) {
        const auto x = gc.coords_of(s);
        vals[s] = norm(x) < out.R ? u.at(s) : 1e6;
        for (std::size_t k = 1; k < gc.nt(); ++k)
            vals[k * ns + s] = semi_lax_upper_bound(bottom, out.C, in.eta, out.eps, sp, x, gc.time(k));
    }
    const GridFunction V(gc, std::move(vals));
    try {
        const auto rep = comparison_check(u, V, cyl);
        out.interior_excess = rep.interior_excess;
        out.boundary_excess = rep.boundary_excess;
        out.interior_nodes = rep.interior_nodes;
        out.boundary_nodes = rep.boundary_nodes;
        out.x = rep.x;
        out.t = rep.t;
    } catch (const Error& e) {
        if (e.code() != Errc::BoundaryOrderingFailed) throw;
        out.boundary_ok = false;
        out.note = e.what();
    }
    out.pass = out.boundary_ok && out.interior_excess <= 2.0 * out.tolerance;
    return out;
}

/// The five shipped comparison instances.
inline std::vector<ComparisonInstance> shipped_comparison_instances() {
    std::vector<ComparisonInstance> v(5);
    v[0].name = "p3-rough";
    v[1].name = "p2.5-mild";
    v[1].p = 2.5;
    v[1].A = 1.5;
    v[1].coeff = {6.0, 5.0, 0.3};
    v[1].seed = 2;
    v[2].name = "p4-fast";
    v[2].p = 4.0;
    v[2].coeff = {20.0, 3.0, 0.5};
    v[2].eta = 1.0;
    v[2].seed = 3;
    v[3].name = "p3-constant-coeff";
    v[3].A = 1.0;
    v[3].coeff.amp = 0.0;
    v[3].forcing_fraction = 1.0;
    v[3].diffusion_fraction = 1.0;
    v[3].seed = 4;
    v[4].name = "p3-2d";
    v[4].d = 2;
    v[4].h = 1.0 / 32.0;
    v[4].nt = 33;
    v[4].seed = 5;
    return v;
}

// ---------------------------------------------------------------------------
// Two-case lemma on a rough-coefficient instance
// ---------------------------------------------------------------------------

struct TwoCaseInstance {
    double p = 3.0;
    double A = 2.0;
    double eta = 1e-3;
    double h = 1.0 / 256.0;
    std::size_t nt = 65;
    RoughCoefficient coeff;
    double dip_width = 4.0;     // in grid spacings
    double dip_position = 0.5;  // fraction of R, snapped to a node
};

struct TwoCaseOutcome {
    LemmaConstants k;
    TwoCaseReport dip;     // bottom touches 0 at one point: case 1 expected
    TwoCaseReport raised;  // bottom >= theta on B_R: case 2 expected
    GridFunction u_dip, u_raised;
    bool constants_ok = false;
    bool pass = false;
};

/**
 * Both solutions solve u_t + a|Du|^p - (eps/2) m^+(D^2u) = f, which makes them
 * sub- and supersolutions of the two lemma inequalities for |f| <= eps.
 * The dip run uses f = +eps (pushes up, against case 1); the raised run uses
 * f = -eps (pushes down, against case 2).
 */
inline TwoCaseOutcome run_two_case(const TwoCaseInstance& in) {
    const EquationParams params(in.p, in.A, 0.0, 1);
    TwoCaseOutcome out;
    out.k = lemma_constants(params, in.eta);
    const auto& k = out.k;
    out.constants_ok = k.upper_bound <= 1.0 - k.theta && k.eps < 0.5 * k.theta && k.eps < 0.5 / k.C_b;

    const double L = std::ceil((k.R + k.r + 0.05) / in.h) * in.h;
    const auto n = static_cast<std::size_t>(std::lround(2.0 * L / in.h)) + 1;
    const auto grid = GridGeometry::cube(1, -L, L, n, 0.0, 1.0, in.nt);
    const double eps = k.eps;

    auto spec = rough_spec(in.p, in.A, in.coeff, 0.5 * eps);
    spec.forcing_time_independent = true;

    const double y0 = std::round(in.dip_position * k.R / in.h) * in.h;
    const double w = in.dip_width * in.h;
    const SpaceFn dip = [=](std::span<const double> x) {
        const double z = (x[0] - y0) / w;
        const double bump = std::abs(z) < 1.0 ? (1.0 - z * z) * (1.0 - z * z) : 0.0;
        return (1.0 - eps) * (1.0 - bump);
    };
    spec.forcing = [eps](std::span<const double>, double) { return eps; };
    out.u_dip = solve_hj(spec, dip, [&](std::span<const double> x, double) { return dip(x); }, SolveConfig{grid}).u;

    const BumpFunction b;
    const double th = k.theta, R = k.R, ramp = 0.5 * k.R;
    const SpaceFn raised = [=](std::span<const double> x) {
        return eps + 2.0 * th * b(0.75 + 0.25 * (std::abs(x[0]) - R) / ramp).b;
    };
    spec.forcing = [eps](std::span<const double>, double) { return -eps; };
    out.u_raised =
        solve_hj(spec, raised, [&](std::span<const double> x, double) { return raised(x); }, SolveConfig{grid}).u;

    const auto prm = params.with_eps(eps);
    out.dip = two_case_oscillation_check(out.u_dip, prm, k.R, k.r, k.theta);
    out.raised = two_case_oscillation_check(out.u_raised, prm, k.R, k.r, k.theta);
    out.pass = out.constants_ok && out.dip.which_case == 1 && out.dip.pass && out.raised.which_case == 2 &&
               out.raised.pass;
    return out;
}

// ---------------------------------------------------------------------------
// Scale induction on computed solutions
// ---------------------------------------------------------------------------

enum class ForcingKind { None, Constant, Singular };

struct ImprovementInstance {
    std::string name = "default";
    double p = 3.0;
    double A = 2.0;
    RoughCoefficient coeff;
    ForcingKind forcing = ForcingKind::None;
    double M = 0.05;       // constant level or singular amplitude
    double gamma = 0.4;    // singular exponent
    double x0 = 0.1;       // singular location
    std::optional<double> m;
    std::uint64_t seed = 1;
    std::size_t modes = 4;
    double frequency = 1.0;  // data varies on the scale of the outer cylinder
    std::size_t n = 257;   // nodes on [-1, 1]
    std::size_t nt = 129;
    double lambda = 0.5;
    double eta = 1e-3;
    double fit_floor_spacings = 8.0;  // the 4-spacing level is grid-limited; the induction still goes there
};

struct ImprovementOutcome {
    LemmaConstants k;
    double alpha = 0.0;
    std::string binding;
    ScaleIterationReport iteration;
    HolderEstimate fit;
    SolveStats stats;
    bool pass = false;
    std::string note;
};

inline GridFunction solve_improvement_instance(const ImprovementInstance& in, double eps) {
    auto spec = rough_spec(in.p, in.A, in.coeff, eps);
    const double h = 2.0 / static_cast<double>(in.n - 1);
    switch (in.forcing) {
        case ForcingKind::None: break;
        case ForcingKind::Constant: {
            const double M = in.M;
            spec.forcing = [M](std::span<const double>, double) { return M; };
            spec.forcing_time_independent = true;
            break;
        }
        case ForcingKind::Singular:
            spec.forcing = singular_forcing(in.M, in.gamma, {in.x0}, 0.5 * h);
            spec.forcing_time_independent = true;
            break;
    }
    const auto init = random_smooth_data(in.seed, 1, in.modes, 0.0, 1.0, in.frequency);
    return solve_hj(spec, init, [&](std::span<const double> x, double) { return init(x); },
                    SolveConfig{GridGeometry::cube(1, -1.0, 1.0, in.n, 0.0, 1.0, in.nt)})
        .u;
}

/**
 * theta from the subsolution at the lemma radius, alpha from admissible_alpha,
 * then the scale induction on Q_{lambda^k}(0, 1) down to four spacings and a
 * log-log fit over the levels above fit_floor_spacings.
 */
inline ImprovementOutcome run_improvement(const ImprovementInstance& in, const LemmaConstants& k) {
    ImprovementOutcome out;
    out.k = k;
    const auto choice = admissible_alpha(in.p, in.m, 1.0, in.lambda, k.theta);
    out.alpha = choice.alpha;
    out.binding = choice.binding;
    auto spec_eps = k.eps;
    const auto u = solve_improvement_instance(in, spec_eps);
    const EquationParams params(in.p, in.A, k.eps, 1, in.m);
    ScaleIterationConfig cfg;
    cfg.lambda = in.lambda;
    cfg.theta = k.theta;
    cfg.alpha = out.alpha;
    out.iteration = iterate_scales(u, params, {0.0}, 1.0, cfg);
    MeasureOptions mo;
    mo.floor_spacings = in.fit_floor_spacings;
    const auto samples = measure_oscillations(u, {0.0}, 1.0, in.lambda, out.iteration.beta, cfg.max_levels, mo);
    try {
        out.fit = fit_holder(samples);
    } catch (const Error& e) {
        out.note = e.what();
        return out;
    }
    out.pass = out.iteration.pass && out.fit.alpha_hat > 0.0 && out.fit.max_fit_residual < 0.1;
    return out;
}

inline ImprovementOutcome run_improvement(const ImprovementInstance& in) {
    return run_improvement(in, lemma_constants(EquationParams(in.p, in.A, 0.0, 1), in.eta));
}

/// Five rough-coefficient instances; the last has forcing in L^2 but not L^infinity.
inline std::vector<ImprovementInstance> shipped_improvement_instances() {
    std::vector<ImprovementInstance> v(5);
    v[0].name = "rough-10-7";
    v[1].name = "rough-20-3";
    v[1].coeff = {20.0, 3.0, 0.5};
    v[1].seed = 2;
    v[2].name = "rough-forced";
    v[2].coeff = {5.0, 11.0, 0.4};
    v[2].forcing = ForcingKind::Constant;
    v[2].M = 0.05;
    v[2].seed = 3;
    v[3].name = "rough-many-modes";
    v[3].modes = 8;
    v[3].seed = 4;
    v[4].name = "singular-forcing";
    v[4].forcing = ForcingKind::Singular;
    v[4].M = 0.1;
    v[4].gamma = 0.4;
    v[4].m = 2.0;
    v[4].seed = 5;
    return v;
}

}  // namespace hjholder::experiments
