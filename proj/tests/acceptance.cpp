// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Every tolerance used for a verdict is a named constant in this file.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hjholder/barriers.hpp"
#include "hjholder/experiments.hpp"
#include "hjholder/extremal.hpp"
#include "hjholder/oscillation.hpp"
#include "hjholder/scaling.hpp"
#include "hjholder/scheme.hpp"
#include "hjholder/variational.hpp"
#include "support.hpp"

using namespace hjholder;
using testing_support::uniform;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const char* title, const std::function<Verdict()>& body) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (!v.pass) ++failures;
    std::printf("criterion %2d: %s  %s  [%s] (%.1fs)\n", id, v.pass ? "PASS" : "FAIL", title, v.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// --- 1 ---------------------------------------------------------------------

constexpr double kLegendreTol = 1e-6;

Verdict legendre_oracle() {
    double worst = 0.0;
    for (double p : {1.5, 2.0, 3.0, 4.0})
        for (double A : {0.5, 1.0, 2.0}) {
            const auto lag = legendre_closed(p, A);
            for (int i = 0; i < 50; ++i) {
                const double q = -10.0 + 20.0 * i / 49.0;
                const std::vector<double> qv{q};
                // maximizer |xi| = (|q| / (A p))^{1/(p-1)}; give it room on both sides
                const double window = 2.0 * std::pow(std::abs(q) / (A * p), 1.0 / (p - 1.0)) + 1.0;
                worst = std::max(worst, std::abs(lag(qv) - legendre_brute(p, A, 0.0, qv, window)));
            }
        }
    const auto L2 = legendre_closed(2.0, 1.0);
    double quad = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double q = -10.0 + 20.0 * i / 49.0;
        quad = std::max(quad, std::abs(L2.of_norm(q) - q * q / 4.0));
    }
    return {worst <= kLegendreTol && quad <= 1e-12, fmt("max |closed - brute| %.2e, p=2 A=1 vs q^2/4 %.1e", worst, quad)};
}

// --- 2 ---------------------------------------------------------------------

Verdict first_order() {
    double worst = INFINITY;
    for (double p : {1.5, 2.0, 3.0})
        for (double A : {1.0, 2.0}) {
            const EquationParams params(p, A);
            const auto m = first_order_margins(params, first_order_constants(params));
            worst = std::min({worst, m.a1, m.a2, m.a3});
        }
    const auto w = first_order_margins(EquationParams(2.0, 1.0), {4.0, 1.0 / 32.0, 1.0 / 256.0});
    const bool ok = worst >= 0.0 && w.ok();
    return {ok, fmt("min margin over sweep %.3e; worked triple margins %.4g %.4g %.4g", worst, w.a1, w.a2, w.a3)};
}

// --- 3, 4 ------------------------------------------------------------------

constexpr double kSuperTol = -1e-10;
constexpr double kSubTol = 1e-10;

Verdict supersolution_certificate() {
    double worst = INFINITY;
    int runs = 0;
    for (double p : {2.5, 3.0, 4.0})
        for (double eta : {0.1, 1.0})
            for (int d : {1, 2})
                for (double A : {1.0, 2.0}) {
                    const EquationParams params(p, A, 0.0, d);
                    const auto k = find_supersolution_constants(params, eta);
                    // rescan independently of the search
                    const SupersolutionBarrier bar(k.C, eta, params.with_eps(eta * k.eps0));
                    worst = std::min(worst, scan_supersolution(bar, BarrierGrid{}, kSuperTol).worst);
                    ++runs;
                }
    return {worst >= kSuperTol, fmt("%d runs, min residual %.3e on |x|<=2, t in [1e-3,1], 65/axis", runs, worst)};
}

Verdict subsolution_certificate() {
    double worst = -INFINITY, cb_err = 0.0;
    bool theta_ok = true;
    int runs = 0;
    for (double p : {2.5, 3.0, 4.0})
        for (int d : {1, 2})
            for (double A : {1.0, 2.0})
                for (double R : {0.25, 0.5, 1.0}) {
                    const EquationParams params(p, A, 0.0, d);
                    const auto k = find_subsolution_constants(params, R);
                    const double db = BumpFunction::sup_db(), d2b = BumpFunction::sup_d2b();
                    cb_err = std::max(cb_err, std::abs(k.C_b - (2.0 * db + d2b / R)));
                    const double bound = std::pow(R, p) / (4.0 * A * std::pow(db, p - 1.0));
                    theta_ok = theta_ok && std::pow(k.theta, p - 1.0) <= bound && k.theta > 0.0 && k.theta < 0.25;
                    const SubsolutionBarrier bar(k.theta, R, k.eps, k.C_b);
                    worst = std::max(worst, scan_subsolution(bar, params, BarrierGrid{2.0, 65, 0.0, 1.0, 65, false}).worst);
                    worst = std::max(worst, scan_subsolution(bar, params, subsolution_grid(R)).worst);
                    ++runs;
                }
    return {worst <= kSubTol && cb_err <= 1e-12 && theta_ok,
            fmt("%d runs, max residual %.3e; C_b formula err %.1e; theta bound %s", runs, worst, cb_err,
                theta_ok ? "holds" : "violated")};
}

// --- 5 ---------------------------------------------------------------------

constexpr double kDerivRelTol = 1e-5;

using Field = std::function<double(std::span<const double>, double)>;

// Central differences; returns the largest relative mismatch against the jet.
double jet_mismatch(const Field& f, const BarrierJet& jet, const std::vector<double>& x, double t, double h) {
    const std::size_t d = x.size();
    auto at = [&](std::size_t a, double da, std::size_t b, double db) {
        auto y = x;
        y[a] += da;
        y[b] += db;
        return f(y, t);
    };
    const double scale = 1.0 + std::abs(jet.value);
    auto rel = [&](double analytic, double fd) { return std::abs(analytic - fd) / std::max(std::abs(fd), scale); };
    double worst = rel(jet.time_derivative, (f(x, t + h) - f(x, t - h)) / (2.0 * h));
    for (std::size_t a = 0; a < d; ++a) {
        worst = std::max(worst, rel(jet.gradient[a], (at(a, h, a, 0.0) - at(a, -h, a, 0.0)) / (2.0 * h)));
        for (std::size_t b = 0; b < d; ++b) {
            const double fd = a == b ? (at(a, h, a, 0.0) - 2.0 * f(x, t) + at(a, -h, a, 0.0)) / (h * h)
                                     : (at(a, h, b, h) - at(a, h, b, -h) - at(a, -h, b, h) + at(a, -h, b, -h)) /
                                           (4.0 * h * h);
            worst = std::max(worst, rel(jet.hessian(a, b), fd));
        }
    }
    return worst;
}

Verdict barrier_derivatives() {
    const EquationParams params(3.0, 2.0, 0.0, 2);
    const auto ks = find_supersolution_constants(params, 0.1);
    const SupersolutionBarrier sup(ks.C, 0.1, params.with_eps(0.1 * ks.eps0));
    const double R = 0.5;
    const SubsolutionBarrier sub(0.05, R, 1e-3, 2.0 * BumpFunction::sup_db() + BumpFunction::sup_d2b() / R);
    const double h = 2e-5;
    std::mt19937_64 rng(2024);
    double worst_sup = 0.0, worst_sub = 0.0;
    for (int n = 0; n < 100;) {
        const std::vector<double> x{uniform(rng, -1.5, 1.5), uniform(rng, -1.5, 1.5)};
        const double t = uniform(rng, 0.05, 0.95);
        worst_sup = std::max(worst_sup, jet_mismatch([&](std::span<const double> y, double s) { return sup.value(y, s); },
                                                     supersolution_eval(sup, x, t), x, t, h));
        ++n;
    }
    for (int n = 0; n < 100;) {
        const std::vector<double> x{uniform(rng, -0.8, 0.8), uniform(rng, -0.8, 0.8)};
        const double t = uniform(rng, 0.05, 0.95);
        // keep the stencil off the two seams of the bump profile and off the origin
        const double s = norm(x) / R + 0.25 * t;
        if (std::abs(s - 0.75) < 8.0 * h / R || std::abs(s - 1.0) < 8.0 * h / R || norm(x) < 8.0 * h) continue;
        worst_sub = std::max(worst_sub, jet_mismatch([&](std::span<const double> y, double tt) {
                                                         return subsolution_eval(sub, y, tt).value;
                                                     },
                                                     subsolution_eval(sub, x, t), x, t, h));
        ++n;
    }
    return {worst_sup <= kDerivRelTol && worst_sub <= kDerivRelTol,
            fmt("max relative mismatch: supersolution %.2e, subsolution %.2e", worst_sup, worst_sub)};
}

// --- 6 ---------------------------------------------------------------------

constexpr double kMoreauTol = 1e-4;
constexpr double kQuadraticTol = 0.05;
constexpr double kOrderLo = 0.7, kOrderHi = 1.3;

double quad_exact(std::span<const double> x, double t) { return x[0] * x[0] / (1.0 + 4.0 * t); }

double quadratic_error(std::size_t per_unit) {
    HamiltonianSpec spec;
    spec.p = 2.0;
    SolveConfig cfg{GridGeometry::cube(1, -2.0, 2.0, 4 * per_unit + 1, 0.0, 0.5, 11)};
    const auto u = solve_hj(spec, [](std::span<const double> x) { return quad_exact(x, 0.0); }, quad_exact, cfg).u;
    const auto& g = u.geometry();
    double err = 0.0;
    for (std::size_t k = 0; k < g.nt(); ++k)
        for (std::size_t s = 0; s < g.nodes_per_slice(); ++s) {
            const auto x = g.coords_of(s);
            if (std::abs(x[0]) > 1.0) continue;
            err = std::max(err, std::abs(u.at(k * g.nodes_per_slice() + s) - quad_exact(x, g.time(k))));
        }
    return err;
}

Verdict hopf_lax_oracle() {
    const auto lag = legendre_closed(2.0, 1.0);
    const auto b = sample_parabolic_boundary(
        1, 8.0, 0.0, 1.0, 1.0 / 512.0, [](std::span<const double> y, double) { return std::abs(y[0]); }, false);
    double moreau = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double x = -3.0 + 6.0 * i / 19.0;
        const double exact = std::abs(x) <= 2.0 ? x * x / 4.0 : std::abs(x) - 1.0;
        const std::vector<double> xv{x};
        moreau = std::max(moreau, std::abs(hopf_lax_eval(b, lag, xv, 1.0) - exact));
    }
    const double e64 = quadratic_error(64), e128 = quadratic_error(128);
    const double order = std::log2(e64 / e128);
    return {moreau <= kMoreauTol && e128 <= kQuadraticTol && order >= kOrderLo && order <= kOrderHi,
            fmt("Moreau max err %.2e; |x|^2/(1+4t) err %.4f at dx=1/128, order %.2f", moreau, e128, order)};
}

// --- 7, 8, 9 ---------------------------------------------------------------

Verdict comparison() {
    std::string detail;
    bool ok = true;
    for (const auto& in : experiments::shipped_comparison_instances()) {
        const auto o = experiments::run_comparison(in);
        ok = ok && o.pass;
        detail += fmt("%s%s %s interior excess %.3g tol %.3g", detail.empty() ? "" : "; ", in.name.c_str(),
                      o.pass ? "ok" : "FAIL", o.interior_excess, o.tolerance);
    }
    return {ok, detail};
}

Verdict two_case() {
    const auto o = experiments::run_two_case(experiments::TwoCaseInstance{});
    return {o.pass && o.constants_ok && o.dip.which_case == 1 && o.raised.which_case == 2,
            fmt("theta %.3g R %.4g; dip: case %d max %.4g <= %.4g; raised: case %d min %.3g >= %.3g", o.k.theta, o.k.R,
                o.dip.which_case, o.dip.witness, o.dip.bound, o.raised.which_case, o.raised.witness, o.raised.bound)};
}

constexpr double kFitResidualTol = 0.1;

Verdict improvement() {
    std::string detail;
    bool ok = true;
    const auto k = experiments::lemma_constants(EquationParams(3.0, 2.0, 0.0, 1), 1e-3);
    for (const auto& in : experiments::shipped_improvement_instances()) {
        const auto o = experiments::run_improvement(in, k);
        const bool pass = o.iteration.pass && o.fit.alpha_hat > 0.0 && o.fit.max_fit_residual < kFitResidualTol;
        ok = ok && pass;
        detail += fmt("%s%s %s alpha %.4g levels %zu alpha_hat %.3f residual %.3f", detail.empty() ? "" : "; ",
                      in.name.c_str(), pass ? "ok" : "FAIL", o.alpha, o.iteration.levels.size(), o.fit.alpha_hat,
                      o.fit.max_fit_residual);
    }
    return {ok, detail};
}

// --- 10 --------------------------------------------------------------------

constexpr double kMeterTol = 0.05;
constexpr double kExactTol = 1e-12;

Verdict holder_meter() {
    const auto g = GridGeometry::cube(1, -1.0, 1.0, 513, -1.0, 0.0, 33);
    // Balls are open; widening the outer radius by 2^-20 keeps the lattice nodes
    // at +-2^-k inside every level, so no level loses its extreme node.
    const MeasureOptions wide{1.0 + 0x1.0p-20};
    double worst = 0.0;
    std::string detail;
    for (double alpha : {0.3, 0.5, 0.6, 1.0}) {
        const auto u = GridFunction::sample(g, [&](std::span<const double> x, double) { return std::pow(std::abs(x[0]), alpha); });
        const auto est = fit_holder(measure_oscillations(u, {0.0}, 0.0, 0.5, 2.0, 20, wide));
        worst = std::max(worst, std::abs(est.alpha_hat - alpha));
        detail += fmt("%.1f->%.3f ", alpha, est.alpha_hat);
    }
    OscillationSamples exact;
    double r = 1.0;
    for (std::size_t k = 0; k < 12; ++k, r *= 0.5) exact.levels.push_back({k, r, 0.7 * std::pow(r, 0.45), 10});
    const auto est = fit_holder(exact);
    const double exact_err = std::max(std::abs(est.alpha_hat - 0.45), std::abs(est.c_hat - 0.7));
    return {worst <= kMeterTol && exact_err <= kExactTol, detail + fmt("; exact power err %.1e", exact_err)};
}

// --- 11 --------------------------------------------------------------------

constexpr double kScalingTol = 1e-10;

// u = sin(x) e^{-t} + x^2 t / 2 + x, with its derivatives in closed form.
struct Probe {
    double u, ux, uxx, ut;
};
Probe probe(double x, double t) {
    return {std::sin(x) * std::exp(-t) + 0.5 * x * x * t + x, std::cos(x) * std::exp(-t) + x * t + 1.0,
            -std::sin(x) * std::exp(-t) + t, -std::sin(x) * std::exp(-t) + 0.5 * x * x};
}

Verdict scaling_algebra() {
    std::mt19937_64 rng(7);
    double delta_err = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double p = uniform(rng, 2.05, 6.0), m = uniform(rng, 1.05, 5.0);
        const double d = static_cast<double>(1 + rng() % 5);
        delta_err = std::max(delta_err, std::abs(delta_exponent(p, m, d, 0.0) - (p * (1.0 - 1.0 / m) - d / m)));
        const auto rep = transform_coeffs(0.5, 0.25, 2.0, EquationParams(p, 1.0, 0.0, static_cast<int>(d), m));
        delta_err = std::max(delta_err, std::abs(rep.delta - (p * (1.0 - 1.0 / m) - d / m)));
    }
    int window_mismatch = 0;
    for (int i = 0; i < 1000; ++i) {
        const double p = uniform(rng, 2.05, 8.0), m = uniform(rng, 1.01, 4.0);
        const double d = static_cast<double>(1 + rng() % 6);
        if (beta_window(p, m, d).nonempty != (p * (m - 1.0) > d)) ++window_mismatch;
    }
    // v(x,t) = c u(ax, bt): residual under the transformed coefficients is b c times u's residual
    double func_err = 0.0, trip_err = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double p = uniform(rng, 2.1, 5.0), A = uniform(rng, 0.5, 2.0), eps = uniform(rng, 0.0, 0.3);
        const double a = uniform(rng, 0.2, 3.0), b = uniform(rng, 0.2, 3.0), c = uniform(rng, 0.2, 3.0);
        const EquationParams params(p, A, eps, 1);
        const auto s = transform_coeffs(a, b, c, params);
        const double x = uniform(rng, -1.0, 1.0), t = uniform(rng, 0.0, 1.0);
        const auto U = probe(a * x, b * t);
        const double vt = c * b * U.ut, vx = c * a * U.ux, vxx = c * a * a * U.uxx;
        const double res_u = U.ut + A * std::pow(std::abs(U.ux), p) - eps * std::max(U.uxx, 0.0);
        const double res_v = vt + A * s.grad_coeff_factor * std::pow(std::abs(vx), p) -
                             eps * s.diff_coeff_factor * std::max(vxx, 0.0);
        func_err = std::max(func_err, std::abs(res_v - s.rhs_factor * res_u) / (1.0 + std::abs(res_v)));
        const auto back = transform_coeffs(1.0 / a, 1.0 / b, 1.0 / c, params);
        trip_err = std::max({trip_err, std::abs(s.grad_coeff_factor * back.grad_coeff_factor - 1.0),
                             std::abs(s.diff_coeff_factor * back.diff_coeff_factor - 1.0),
                             std::abs(s.rhs_factor * back.rhs_factor - 1.0)});
    }
    bool exact_unit = true;
    for (double p : {2.5, 3.0, 4.0, 7.0})
        exact_unit = exact_unit && transform_coeffs(0.5, std::pow(2.0, -p), 1.0, EquationParams(p, 1.0)).grad_coeff_factor == 1.0;
    const bool ok = delta_err <= kScalingTol && window_mismatch == 0 && func_err <= kScalingTol &&
                    trip_err <= kScalingTol && exact_unit;
    return {ok, fmt("delta err %.1e; beta window mismatches %d/1000; functional err %.1e; round trip %.1e; "
                    "(1/2, 2^-p) factor %s",
                    delta_err, window_mismatch, func_err, trip_err, exact_unit ? "exactly 1" : "not 1")};
}

// --- 12 --------------------------------------------------------------------

constexpr double kExtremalTol = 1e-9;

Verdict extremal_properties() {
    std::mt19937_64 rng(99);
    double worst = 0.0;
    for (std::size_t d : {1u, 2u, 3u, 5u})
        for (int trial = 0; trial < 1000; ++trial) {
            const auto X = testing_support::random_sym(rng, d, 2.0);
            const auto Y = testing_support::random_sym(rng, d, 2.0);
            const double c = uniform(rng, 0.0, 5.0);
            const auto Z = X + testing_support::random_psd(rng, d);
            worst = std::max({worst, std::abs(m_plus(X) + m_minus(-X)),
                              m_plus(X + Y) - m_plus(X) - m_plus(Y),
                              m_minus(X) + m_minus(Y) - m_minus(X + Y),
                              std::abs(m_plus(X * c) - c * m_plus(X)) / (1.0 + c),
                              std::abs(m_minus(X * c) - c * m_minus(X)) / (1.0 + c),
                              m_plus(X) - m_plus(Z), m_minus(X) - m_minus(Z)});
        }
    return {worst <= kExtremalTol, fmt("4000 matrices, d in {1,2,3,5}, worst violation %.2e", worst)};
}

}  // namespace

int main() {
    report(1, "Legendre transform oracle", legendre_oracle);
    report(2, "first-order constants", first_order);
    report(3, "supersolution certificate", supersolution_certificate);
    report(4, "subsolution certificate", subsolution_certificate);
    report(5, "barrier derivatives", barrier_derivatives);
    report(6, "Hopf-Lax and solver oracle", hopf_lax_oracle);
    report(7, "comparison below the barrier", comparison);
    report(8, "two-case lemma end to end", two_case);
    report(9, "improvement of oscillation", improvement);
    report(10, "Holder meter calibration", holder_meter);
    report(11, "scaling algebra", scaling_algebra);
    report(12, "extremal operators", extremal_properties);
    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
