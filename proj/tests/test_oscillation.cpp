#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hjholder/oscillation.hpp"

using namespace hjholder;

namespace {

// [-1,1] with spacing 2^-8 and t in [-1,0]. Balls are open, so the outer
// radius is widened by 2^-20 to keep the nodes at +-2^-k inside.
constexpr double kWide = 1.0 + 0x1.0p-20;

GridFunction on_unit_grid(const std::function<double(double, double)>& f, std::size_t n = 513, std::size_t nt = 33) {
    const auto g = GridGeometry::cube(1, -1.0, 1.0, n, -1.0, 0.0, nt);
    return GridFunction::sample(g, [&](std::span<const double> x, double t) { return f(x[0], t); });
}

OscillationSamples exact_power(double alpha, double lambda, std::size_t K) {
    OscillationSamples s;
    s.requested = K;
    double r = 1.0;
    for (std::size_t k = 0; k < K; ++k, r *= lambda) s.levels.push_back({k, r, std::pow(r, alpha), 10});
    return s;
}

}  // namespace

TEST(Measure, ConstantHasNoOscillation) {
    const auto u = on_unit_grid([](double, double) { return 3.0; });
    const auto s = measure_oscillations(u, {0.0}, 0.0, 0.5, 2.0, 6);
    ASSERT_EQ(s.levels.size(), 6u);
    for (const auto& l : s.levels) EXPECT_EQ(l.osc, 0.0);
    EXPECT_FALSE(s.truncated);
    EXPECT_TRUE(s.outer_inside_domain);
}

TEST(Measure, PowerOfDistance) {
    const double alpha = 0.3;
    const auto u = on_unit_grid([&](double x, double) { return std::pow(std::abs(x), alpha); });
    const auto s = measure_oscillations(u, {0.0}, 0.0, 0.5, 2.0, 6, MeasureOptions{kWide});
    ASSERT_EQ(s.levels.size(), 6u);
    for (const auto& l : s.levels) EXPECT_NEAR(l.osc, std::pow(0.5, alpha * static_cast<double>(l.level)), 1e-14);
}

TEST(Measure, LinearSlopeTwo) {
    const auto u = on_unit_grid([](double x, double) { return 2.0 * x; });
    const auto s = measure_oscillations(u, {0.0}, 0.0, 0.5, 2.0, 6, MeasureOptions{kWide});
    for (const auto& l : s.levels) EXPECT_NEAR(l.osc, 4.0 * std::pow(0.5, static_cast<double>(l.level)), 1e-14);
}

TEST(Measure, NonincreasingAndTruncated) {
    const auto u = on_unit_grid([](double x, double t) { return std::sin(5.0 * x) + t * t; });
    const auto s = measure_oscillations(u, {0.1}, -0.1, 0.5, 1.5, 40, MeasureOptions{0.8});
    EXPECT_TRUE(s.truncated);
    EXPECT_FALSE(s.truncation_reason.empty());
    EXPECT_EQ(s.requested, 40u);
    EXPECT_LT(s.levels.size(), 40u);
    for (std::size_t k = 1; k < s.levels.size(); ++k) EXPECT_LE(s.levels[k].osc, s.levels[k - 1].osc);
    // Smallest kept radius stays above four spacings.
    EXPECT_GE(s.levels.back().r, 4.0 * 2.0 / 512.0);
}

TEST(Measure, OuterCylinderOutsideDomainIsReported) {
    const auto u = on_unit_grid([](double x, double) { return x; });
    const auto s = measure_oscillations(u, {0.5}, 0.0, 0.5, 2.0, 3);
    EXPECT_FALSE(s.outer_inside_domain);
}

TEST(Measure, EmptyAtLevelZeroThrows) {
    const auto u = on_unit_grid([](double x, double) { return x; });
    try {
        measure_oscillations(u, {5.0}, 0.0, 0.5, 2.0, 3, MeasureOptions{0.5});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::EmptyIntersection);
    }
}

TEST(Improvement, ExactPowerIsBoundaryCase) {
    const auto rep = check_improvement(exact_power(0.4, 0.5, 10), 0.4, 0.5);
    EXPECT_TRUE(rep.pass);
    EXPECT_EQ(rep.vacuous, 0u);
}

TEST(Improvement, SmallerExponentPasses) {
    const auto u = on_unit_grid([](double x, double) { return std::pow(std::abs(x), 0.5); });
    const auto s = measure_oscillations(u, {0.0}, 0.0, 0.5, 2.0, 6);
    for (double a : {0.1, 0.3, 0.5}) EXPECT_TRUE(check_improvement(s, a, 0.5).pass) << a;
    EXPECT_FALSE(check_improvement(s, 0.7, 0.5).pass);
}

TEST(Improvement, ConstantOscillationFailsAtLevelOne) {
    OscillationSamples s;
    for (std::size_t k = 0; k < 5; ++k) s.levels.push_back({k, std::pow(0.5, static_cast<double>(k)), 1.0, 10});
    const auto rep = check_improvement(s, 0.2, 0.5);
    EXPECT_FALSE(rep.pass);
    ASSERT_TRUE(rep.first_failure.has_value());
    EXPECT_EQ(*rep.first_failure, 1u);
}

TEST(Improvement, VacuousLevelsAreReportedNotFailed) {
    OscillationSamples s;
    s.levels = {{0, 1.0, 1.0, 10}, {1, 0.5, 0.99, 10}, {2, 0.25, 0.99, 10}};
    const auto rep = check_improvement(s, 0.5, 0.5);
    EXPECT_FALSE(rep.pass);
    EXPECT_EQ(*rep.first_failure, 1u);
    EXPECT_EQ(rep.vacuous, 1u);  // level 1 premise fails, so level 2 is not tested
}

TEST(Improvement, InvariantUnderShiftAndScale) {
    auto f = [](double x, double t) { return std::pow(std::abs(x), 0.35) + 0.1 * t; };
    const auto u = on_unit_grid(f);
    const auto base = check_improvement(measure_oscillations(u, {0.0}, 0.0, 0.5, 2.0, 6), 0.3, 0.5);
    for (double shift : {-5.0, 0.0, 7.0})
        for (double scale : {0.01, 1.0, 40.0}) {
            const auto v = u.map([&](double y) { return scale * y + shift; });
            const auto rep = check_improvement(measure_oscillations(v, {0.0}, 0.0, 0.5, 2.0, 6), 0.3, 0.5);
            EXPECT_EQ(rep.pass, base.pass);
            EXPECT_EQ(rep.first_failure, base.first_failure);
            ASSERT_EQ(rep.levels.size(), base.levels.size());
            for (std::size_t k = 0; k < rep.levels.size(); ++k)
                EXPECT_NEAR(rep.levels[k].osc, base.levels[k].osc, 1e-12);
        }
}

TEST(Fit, ExactPowerData) {
    const auto est = fit_holder(exact_power(0.6, 0.5, 12));
    EXPECT_NEAR(est.alpha_hat, 0.6, 1e-12);
    EXPECT_NEAR(est.c_hat, 1.0, 1e-12);
    EXPECT_LE(est.max_fit_residual, 1e-12);
    EXPECT_EQ(est.used, 12u);
    EXPECT_EQ(est.samples.size(), 12u);
}

TEST(Fit, SquareRootOnGrid) {
    const auto u = on_unit_grid([](double x, double) { return std::sqrt(std::abs(x)); });
    const auto s = measure_oscillations(u, {0.0}, 0.0, 0.5, 2.0, 20);
    EXPECT_NEAR(fit_holder(s).alpha_hat, 0.5, 0.05);
}

TEST(Fit, LinearFunction) {
    // Off-node center and radii: open-ball grid error stays below h / r.
    const auto u = on_unit_grid([](double x, double) { return 3.0 * x; }, 4097, 33);
    const auto s = measure_oscillations(u, {0.0013}, 0.0, 0.5, 2.0, 8, MeasureOptions{0.9});
    EXPECT_NEAR(fit_holder(s).alpha_hat, 1.0, 0.02);
}

TEST(Fit, DegenerateData) {
    const auto u = on_unit_grid([](double, double) { return 1.0; });
    const auto s = measure_oscillations(u, {0.0}, 0.0, 0.5, 2.0, 6);
    try {
        fit_holder(s);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DegenerateData);
    }
    EXPECT_THROW(fit_holder(exact_power(0.5, 0.5, 2)), Error);
    // A resolution floor above the small levels removes them from the fit.
    EXPECT_THROW(fit_holder_resolved(exact_power(0.5, 0.5, 8), 0.8), Error);
}

TEST(Modulus, ConstantHasZeroRatio) {
    const auto u = on_unit_grid([](double, double) { return -2.0; });
    const auto rep = holder_modulus_check(u, 0.3, 0.01, 3.0);
    EXPECT_EQ(rep.max_ratio, 0.0);
    EXPECT_TRUE(rep.pass);
    EXPECT_GT(rep.pairs, 100'000u);
}

TEST(Modulus, PowerOfDistancePassesWithUnitConstant) {
    const double alpha = 0.4;
    const auto u = on_unit_grid([&](double x, double) { return std::pow(std::abs(x), alpha); });
    const auto rep = holder_modulus_check(u, alpha, 1.0, 3.0);
    EXPECT_TRUE(rep.pass) << rep.max_ratio;
    EXPECT_LE(rep.max_ratio, 1.0 + 1e-12);
    EXPECT_GT(rep.max_ratio, 0.5);
}

TEST(Modulus, JumpIsLocated) {
    const auto u = on_unit_grid([](double x, double) { return x < 0.25 ? 0.0 : 1.0; });
    const auto rep = holder_modulus_check(u, 0.5, 1.0, 2.0);
    EXPECT_FALSE(rep.pass);
    ASSERT_EQ(rep.x1.size(), 1u);
    EXPECT_LE(std::min(rep.x1[0], rep.x2[0]), 0.25);
    EXPECT_GE(std::max(rep.x1[0], rep.x2[0]), 0.25);
    EXPECT_NEAR(std::abs(rep.x1[0] - rep.x2[0]), 1.0 / 256.0, 1e-15);
}

TEST(Modulus, SeedIsDeterministic) {
    const auto u = on_unit_grid([](double x, double t) { return std::sin(7.0 * x) * std::cos(3.0 * t); });
    ModulusOptions opt;
    opt.random_pairs = 5000;
    const auto a = holder_modulus_check(u, 0.5, 1.0, 2.0, opt);
    const auto b = holder_modulus_check(u, 0.5, 1.0, 2.0, opt);
    EXPECT_EQ(a.max_ratio, b.max_ratio);
    EXPECT_EQ(a.pairs, b.pairs);
    EXPECT_EQ(a.seed, opt.seed);
}

TEST(Modulus, TimeExponent) {
    EXPECT_DOUBLE_EQ(modulus_time_exponent(2.0, 0.5), 0.5 / 1.5);
    EXPECT_DOUBLE_EQ(intrinsic_beta(3.0, 0.25), 2.5);
    EXPECT_THROW(modulus_time_exponent(2.0, 2.0), Error);
}

TEST(Iterate, GeometricDecayAtSelectionRule) {
    const double lambda = 0.5, theta = 0.1;
    // osc_k = (1 - theta)^k exactly: |x|^gamma with lambda^gamma = 1 - theta.
    const double gamma = std::log(1.0 - theta) / std::log(lambda);
    const auto u = on_unit_grid([&](double x, double) { return std::pow(std::abs(x), gamma); });
    const EquationParams params(2.0, 1.0);
    ScaleIterationConfig cfg;
    cfg.lambda = lambda;
    cfg.theta = theta;
    cfg.alpha = std::floor(gamma * 1e4) * 1e-4;
    cfg.beta = 2.0;
    cfg.r0 = kWide;
    const auto rep = iterate_scales(u, params, {0.0}, 0.0, cfg);
    EXPECT_TRUE(rep.pass);
    EXPECT_TRUE(rep.truncated);  // 64 levels cannot be resolved
    EXPECT_EQ(rep.requested_levels, 64u);
    EXPECT_GE(rep.levels.size(), 6u);
    EXPECT_NEAR(rep.holder_constant, std::pow(lambda, -cfg.alpha), 1e-15);
    for (const auto& l : rep.levels)
        EXPECT_NEAR(l.osc, std::pow(1.0 - theta, static_cast<double>(l.level)), 1e-12);
}

TEST(Iterate, SelectionRuleIsEnforced) {
    const auto u = on_unit_grid([](double x, double) { return x; });
    ScaleIterationConfig cfg;
    cfg.lambda = 0.5;
    cfg.theta = 0.1;
    cfg.alpha = 0.5;  // 0.5^0.5 < 0.9
    try {
        iterate_scales(u, EquationParams(2.0, 1.0), {0.0}, 0.0, cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::PreconditionFailed);
    }
    cfg.check_selection_rule = false;
    EXPECT_NO_THROW(iterate_scales(u, EquationParams(2.0, 1.0), {0.0}, 0.0, cfg));
}

TEST(Iterate, FailureIsFlagged) {
    // A step at the center keeps osc at 1 on every level.
    const auto u = on_unit_grid([](double x, double) { return x < 0.0 ? 0.0 : 1.0; });
    ScaleIterationConfig cfg;
    cfg.alpha = 0.1;
    cfg.beta = 2.0;
    const auto rep = iterate_scales(u, EquationParams(2.0, 1.0), {0.0}, 0.0, cfg);
    EXPECT_FALSE(rep.pass);
    EXPECT_EQ(*rep.first_failure, 1u);
    EXPECT_TRUE(std::isnan(rep.holder_constant));
}

TEST(Iterate, PassImpliesModulusAtResolvableSeparations) {
    const double lambda = 0.5, alpha = 0.15;
    const auto u = on_unit_grid([](double x, double) { return std::pow(std::abs(x), 0.3); }, 513, 65);
    ScaleIterationConfig cfg;
    cfg.lambda = lambda;
    cfg.alpha = alpha;
    const EquationParams params(3.0, 1.0);
    const auto it = iterate_scales(u, params, {0.0}, 0.0, cfg);
    ASSERT_TRUE(it.pass);
    ModulusOptions mo;
    mo.region = SpaceTimeRegion{{0.0}, 0.5, -0.5, 0.0};
    mo.min_separation = 4.0 * 2.0 / 512.0;
    const auto m = holder_modulus_check(u.map([&](double v) { return v / it.normalization; }), alpha,
                                        it.holder_constant, params.p(), mo);
    EXPECT_TRUE(m.pass) << m.max_ratio;
}

TEST(Iterate, FamilyOverCoarseCenters) {
    const auto u = on_unit_grid([](double x, double) { return std::pow(std::abs(x), 0.5); });
    ScaleIterationConfig cfg;
    cfg.alpha = 0.15;
    cfg.r0 = 0.25;
    const auto centers = coarse_centers(1, -0.5, 0.5, 5);
    ASSERT_EQ(centers.size(), 5u);
    EXPECT_DOUBLE_EQ(centers[2][0], 0.0);
    const auto fam = iterate_scales_family(u, EquationParams(2.0, 1.0), centers, 0.0, cfg);
    EXPECT_EQ(fam.runs.size(), 5u);
    EXPECT_EQ(fam.pass, fam.failures == 0);
    EXPECT_EQ(coarse_centers(2, 0.0, 1.0, 3).size(), 9u);
}

TEST(TimeExponent, FittedTimeDirectionMatchesGammaBeta) {
    // u = |t|^gamma measured on Q_r = B_r x [-r^beta, 0]: osc = r^{gamma beta}.
    const double gamma = 0.5, beta = 2.0;
    const auto u = on_unit_grid([&](double, double t) { return std::pow(std::abs(t), gamma); }, 257, 4097);
    const auto s = measure_oscillations(u, {0.0}, 0.0, 0.5, beta, 20);
    ASSERT_GE(s.levels.size(), 3u);
    EXPECT_NEAR(fit_holder(s).alpha_hat, gamma * beta, 0.05);
}

TEST(Sweep, ReportsLargestPassingAlpha) {
    const auto u = on_unit_grid([](double x, double) { return std::pow(std::abs(x), 0.3); }, 513, 65);
    ModulusOptions mo;
    mo.random_pairs = 2000;
    const auto rep = alpha_sweep(u, EquationParams(3.0, 1.0), {0.0}, 0.0, 0.5, mo);
    ASSERT_FALSE(rep.rows.empty());
    EXPECT_NEAR(rep.rows.front().alpha, 0.05, 1e-15);
    EXPECT_LE(rep.rows.back().alpha, 1.0 + 1e-12);
    ASSERT_TRUE(rep.best_alpha.has_value());
    EXPECT_NEAR(*rep.best_alpha, 0.3, 1e-9);
}

TEST(Csv, Columns) {
    const auto u = on_unit_grid([](double x, double) { return x; });
    ScaleIterationConfig cfg;
    cfg.alpha = 0.1;
    std::ostringstream os;
    write_levels_csv(os, iterate_scales(u, EquationParams(2.0, 1.0), {0.0}, 0.0, cfg));
    EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "level,r,osc,bound,pass");
    AlphaSweepReport sw;
    sw.rows.push_back({0.05, 0.1, 1.2, 0.3, true});
    std::ostringstream os2;
    write_sweep_csv(os2, sw);
    EXPECT_EQ(os2.str(), "alpha,time_exponent,C,max_ratio\n0.050000000000000003,0.10000000000000001,1.2,0.29999999999999999\n");
}
