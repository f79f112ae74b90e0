// hjholder command line: constants, barrier certificates, solves, oscillation
// measurement, scaling bookkeeping, the sees-points demo and sweeps.
//
// Exit codes: 0 all checks passed, 1 a verification failed, 2 invalid input.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "hjholder/barriers.hpp"
#include "hjholder/experiments.hpp"
#include "hjholder/grid_io.hpp"
#include "hjholder/oscillation.hpp"
#include "hjholder/scaling.hpp"
#include "hjholder/scheme.hpp"
#include "hjholder/variational.hpp"

using namespace hjholder;
using cli::json;

namespace {

constexpr int kOk = 0, kFailed = 1, kBadInput = 2;
constexpr double kOracleTol = 1e-6;

int exit_for(Errc c) {
    switch (c) {
        case Errc::InvalidInput:
        case Errc::DomainError:
        case Errc::GridTooSmall:
        case Errc::WindowTooSmall:
        case Errc::EmptyBoundary:
        case Errc::EmptyIntersection:
        case Errc::PreconditionFailed:
            return kBadInput;
        default:
            return kFailed;
    }
}

// shortest text that reads back to the same double
std::string num(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

json point_json(const Point& x) { return json(std::vector<double>(x.begin(), x.end())); }

/// Output stream that is either a file or stdout.
struct Sink {
    std::ofstream file;
    std::ostream* os = &std::cout;
    explicit Sink(const std::string& path) {
        if (path.empty() || path == "-") return;
        file.open(path);
        require(static_cast<bool>(file), Errc::InvalidInput, "cannot open '" + path + "' for writing");
        os = &file;
    }
};

std::size_t thread_cap() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HJ_HOLDER_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        require(end != env && *end == '\0' && v >= 1, Errc::InvalidInput, "HJ_HOLDER_THREADS must be a positive integer");
        n = std::min(n, static_cast<std::size_t>(v));
    }
    return n;
}

// ---------------------------------------------------------------------------

struct LegendreArgs {
    double p = 2.0, A = 1.0, shift = 0.0, q_max = 10.0;
    int samples = 50;
};

int cmd_legendre(const LegendreArgs& a) {
    const auto lag = legendre_closed(a.p, a.A, a.shift);
    require(a.samples >= 2 && a.q_max > 0.0, Errc::InvalidInput, "need --samples >= 2 and --q-max > 0");
    double dev = 0.0;
    for (int i = 0; i < a.samples; ++i) {
        const double q = -a.q_max + 2.0 * a.q_max * i / (a.samples - 1);
        const std::vector<double> qv{q};
        const double window = 2.0 * std::pow(std::abs(q) / (a.A * a.p), 1.0 / (a.p - 1.0)) + 1.0;
        dev = std::max(dev, std::abs(lag(qv) - legendre_brute(a.p, a.A, a.shift, qv, window)));
    }
    std::printf("c_p %s\np_prime %s\nA_factor %s\nshift %s\noracle_deviation %.3e\n", num(lag.c_p).c_str(),
                num(lag.p_prime).c_str(), num(lag.coeff_A_power).c_str(), num(lag.shift + 0.0).c_str(), dev);
    const bool ok = dev <= kOracleTol;
    std::printf("status %s\n", ok ? "PASS" : "FAIL");
    return ok ? kOk : kFailed;
}

struct FirstOrderArgs {
    double p = 2.0, A = 1.0;
    std::optional<double> T, theta, eps;
};

int cmd_first_order(const FirstOrderArgs& a) {
    const EquationParams params(a.p, a.A);
    FirstOrderConstants k;
    std::string source = "computed";
    if (a.T || a.theta || a.eps) {
        require(a.T && a.theta && a.eps, Errc::InvalidInput, "--T, --theta and --eps go together");
        k = {*a.T, *a.theta, *a.eps};
        source = "given";
    } else {
        k = first_order_constants(params);
    }
    const auto m = first_order_margins(params, k);
    print_json({{"p", a.p}, {"A", a.A}, {"source", source}, {"T", k.T}, {"theta", k.theta}, {"eps", k.eps},
                {"margins", {{"a1", m.a1}, {"a2", m.a2}, {"a3", m.a3}}}, {"ok", m.ok()}});
    return m.ok() ? kOk : kFailed;
}

struct LemmaArgs {
    double p = 3.0, A = 2.0, eta = 1e-3, margin = 0.45;
};

int cmd_lemma(const LemmaArgs& a) {
    const auto k = experiments::lemma_constants(EquationParams(a.p, a.A, 0.0, 1), a.eta, a.margin);
    const bool ok = k.upper_bound <= 1.0 - k.theta;
    print_json({{"p", a.p}, {"A", a.A}, {"eta", k.eta}, {"C", k.C}, {"eps0", k.eps0}, {"r", k.r}, {"R", k.R},
                {"theta", k.theta}, {"C_b", k.C_b}, {"eps", k.eps}, {"upper_bound", k.upper_bound},
                {"one_minus_theta", 1.0 - k.theta}, {"ok", ok}});
    return ok ? kOk : kFailed;
}

struct BarrierArgs {
    std::string kind = "super";
    double p = 3.0, A = 1.0, eta = 0.1;
    int d = 1;
    std::optional<double> C, eps0, R, theta, eps, Cb;
    std::optional<double> x_max, t_min, t_max;
    std::optional<std::size_t> n_x, n_t;
    bool linear_time = false;
    std::optional<double> tol;
};

int cmd_barrier(const BarrierArgs& a) {
    const EquationParams params(a.p, a.A, 0.0, a.d);
    auto apply = [&](BarrierGrid g) {
        if (a.x_max) g.x_max = *a.x_max;
        if (a.t_min) g.t_min = *a.t_min;
        if (a.t_max) g.t_max = *a.t_max;
        if (a.n_x) g.n_x = *a.n_x;
        if (a.n_t) g.n_t = *a.n_t;
        if (a.linear_time) g.log_time = false;
        return g;
    };
    json out{{"kind", a.kind}, {"p", a.p}, {"A", a.A}, {"d", a.d}};
    ScanReport rep;
    double margin = 0.0;
    if (a.kind == "super") {
        double C = 0.0, eps0 = 0.0;
        if (a.C || a.eps0) {
            require(a.C && a.eps0, Errc::InvalidInput, "--C and --eps0 go together");
            C = *a.C;
            eps0 = *a.eps0;
        } else {
            const auto k = find_supersolution_constants(params, a.eta);
            C = k.C;
            eps0 = k.eps0;
        }
        const double tol = a.tol.value_or(-1e-10);
        const SupersolutionBarrier bar(C, a.eta, params.with_eps(a.eta * eps0));
        const auto grid = apply(BarrierGrid{});
        rep = scan_supersolution(bar, grid, tol);
        margin = rep.worst - tol;
        out.update({{"C", C}, {"eps0", eps0}, {"eta", a.eta}, {"eps", a.eta * eps0}, {"tolerance", tol}});
    } else if (a.kind == "sub") {
        require(a.R.has_value(), Errc::InvalidInput, "--R is required for --kind sub");
        double theta = 0.0, eps = 0.0, Cb = 0.0;
        if (a.theta || a.eps || a.Cb) {
            require(a.theta && a.eps && a.Cb, Errc::InvalidInput, "--theta, --eps and --Cb go together");
            theta = *a.theta;
            eps = *a.eps;
            Cb = *a.Cb;
        } else {
            const auto k = find_subsolution_constants(params, *a.R);
            theta = k.theta;
            eps = k.eps;
            Cb = k.C_b;
        }
        const double tol = a.tol.value_or(1e-10);
        const SubsolutionBarrier bar(theta, *a.R, eps, Cb);
        rep = scan_subsolution(bar, params, apply(subsolution_grid(*a.R)), tol);
        margin = tol - rep.worst;
        out.update({{"R", *a.R}, {"theta", theta}, {"eps", eps}, {"C_b", Cb}, {"tolerance", tol}});
    } else {
        raise(Errc::InvalidInput, "--kind must be super or sub");
    }
    out.update({{"nodes", rep.nodes}, {"grid_spacing", rep.grid_spacing}, {"worst_residual", rep.worst},
                {"worst_x", point_json(rep.x)}, {"worst_t", rep.t}, {"margin", margin}, {"pass", rep.pass}});
    print_json(out);
    return rep.pass ? kOk : kFailed;
}

struct SolveArgs {
    std::string config, out;
};

int cmd_solve(const SolveArgs& a) {
    const auto rc = cli::parse_run_config(cli::read_json(a.config));
    const auto init = rc.init;
    const auto res = solve_hj(rc.spec, init, [&](std::span<const double> x, double) { return init(x); }, rc.solver);
    io::save(a.out, res.u);
    print_json({{"seed", rc.seed}, {"steps", res.stats.steps}, {"min_dt", res.stats.min_dt},
                {"max_alpha", res.stats.max_alpha}, {"capped_steps", res.stats.capped_steps},
                {"warnings", res.stats.warnings}});
    return kOk;
}

struct OscillateArgs {
    std::string in, out;
    double lambda = 0.5, theta = 0.1, p = 3.0, A = 1.0, r0 = 1.0, floor_spacings = 4.0;
    std::optional<double> alpha, m, top;
    std::vector<double> center;
};

int cmd_oscillate(const OscillateArgs& a) {
    const auto u = io::load(a.in);
    const auto& g = u.geometry();
    Point center = a.center.empty() ? Point(g.dim(), 0.0) : Point(a.center.begin(), a.center.end());
    require(center.size() == g.dim(), Errc::InvalidInput, "--center has the wrong dimension");
    const double top = a.top.value_or(g.t_end());
    const EquationParams params(a.p, a.A, 0.0, static_cast<int>(g.dim()), a.m);
    ScaleIterationConfig cfg;
    cfg.lambda = a.lambda;
    cfg.theta = a.theta;
    cfg.r0 = a.r0;
    cfg.floor_spacings = a.floor_spacings;
    std::string binding = "given";
    if (a.alpha) {
        cfg.alpha = *a.alpha;
    } else {
        const auto choice = admissible_alpha(a.p, a.m, static_cast<double>(g.dim()), a.lambda, a.theta);
        cfg.alpha = choice.alpha;
        binding = choice.binding;
    }
    const auto it = iterate_scales(u, params, center, top, cfg);
    MeasureOptions mo;
    mo.r0 = a.r0;
    mo.floor_spacings = a.floor_spacings;
    std::optional<HolderEstimate> fit;
    std::string fit_note;
    try {
        fit = fit_holder(measure_oscillations(u, center, top, a.lambda, it.beta, cfg.max_levels, mo));
    } catch (const Error& e) {
        fit_note = e.what();
    }
    Sink sink(a.out);
    auto& os = *sink.os;
    os << "# input " << a.in << "\n# alpha " << num(cfg.alpha) << " (" << binding << ")\n# beta " << num(it.beta)
       << "\n# normalization " << num(it.normalization) << '\n';
    if (it.truncated) os << "# truncated: " << it.truncation_reason << '\n';
    write_levels_csv(os, it);
    if (fit) {
        os << "# alpha_hat " << num(fit->alpha_hat) << "\n# c_hat " << num(fit->c_hat) << "\n# max_fit_residual "
           << num(fit->max_fit_residual) << '\n';
    } else {
        os << "# fit unavailable: " << fit_note << '\n';
    }
    os << "# iterate " << (it.pass ? "PASS" : "FAIL") << '\n';
    if (!it.pass && it.first_failure) std::fprintf(stderr, "scale induction fails at level %zu\n", *it.first_failure);
    return it.pass ? kOk : kFailed;
}

struct ModulusArgs {
    std::string in;
    double alpha = 0.5, C = 1.0, p = 3.0;
    std::size_t pairs = 100'000;
    std::uint64_t seed = 20240917;
};

int cmd_modulus(const ModulusArgs& a) {
    const auto u = io::load(a.in);
    ModulusOptions opt;
    opt.random_pairs = a.pairs;
    opt.seed = a.seed;
    const auto rep = holder_modulus_check(u, a.alpha, a.C, a.p, opt);
    print_json({{"alpha", rep.alpha}, {"time_exponent", rep.time_exponent}, {"C", rep.C}, {"max_ratio", rep.max_ratio},
                {"x1", point_json(rep.x1)}, {"t1", rep.t1}, {"x2", point_json(rep.x2)}, {"t2", rep.t2},
                {"pairs", rep.pairs}, {"seed", rep.seed}, {"pass", rep.pass}});
    return rep.pass ? kOk : kFailed;
}

struct ScaleArgs {
    double p = 3.0, m = 2.0, d = 1.0, lambda = 0.5, r = 0.5;
    std::optional<double> alpha, theta;
};

json scale_json(const ScaleReport& s) {
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    return {{"a", s.a}, {"b", s.b}, {"c", s.c}, {"grad_coeff_factor", s.grad_coeff_factor},
            {"diff_coeff_factor", s.diff_coeff_factor}, {"rhs_factor", s.rhs_factor}, {"lm_factor", num(s.lm_factor)},
            {"lm_factor_exponent", num(s.lm_factor_exponent)}, {"delta", num(s.delta)},
            {"contracts_diffusion", s.contracts_diffusion}, {"contracts_rhs", s.contracts_rhs}};
}

int cmd_scale(const ScaleArgs& a) {
    require(a.d >= 1.0 && a.d == std::floor(a.d), Errc::InvalidInput, "--d must be a positive integer");
    const EquationParams params(a.p, 1.0, 0.0, static_cast<int>(a.d), a.m);
    const auto w = beta_window(a.p, a.m, a.d);
    json out{{"p", a.p},
             {"m", a.m},
             {"d", a.d},
             {"delta_at_alpha_0", delta_exponent(a.p, a.m, a.d, 0.0)},
             {"lm_scaling_exponent", lm_scaling_exponent(a.p, a.m, a.d)},
             {"forcing_scales_down", forcing_scales_down(a.p, a.m, a.d)},
             {"beta_window", {{"lower", w.lower}, {"upper", w.upper}, {"nonempty", w.nonempty}}},
             {"half_step", scale_json(transform_coeffs(0.5, std::pow(2.0, -a.p), 1.0, params))}};
    bool ok = true;
    if (a.theta) {
        try {
            const auto c = admissible_alpha(a.p, a.m, a.d, a.lambda, *a.theta);
            json active = json::array();
            for (const auto& k : c.active) active.push_back({{"name", k.name}, {"limit", k.limit}, {"strict", k.strict}});
            out["admissible_alpha"] = {{"lambda", a.lambda}, {"theta", *a.theta}, {"alpha", c.alpha},
                                       {"binding", c.binding}, {"constraints", active}};
        } catch (const Error& e) {
            if (e.code() != Errc::Infeasible) throw;
            out["admissible_alpha"] = {{"lambda", a.lambda}, {"theta", *a.theta}, {"infeasible", e.what()}};
            ok = false;
        }
    }
    if (a.alpha) {
        const auto c = calpha_scale(a.r, *a.alpha, params);
        out["calpha"] = {{"r", a.r},
                         {"alpha", c.alpha},
                         {"beta", c.beta},
                         {"diffusion_exponent", c.diffusion_exponent},
                         {"rhs_exponent", c.rhs_exponent},
                         {"lm_exponent", calpha_lm_exponent(a.p, a.m, a.d, c.alpha)},
                         {"delta", delta_exponent(a.p, a.m, a.d, c.alpha)},
                         {"factors_at_most_one", c.factors_at_most_one},
                         {"alpha_below_diffusion_threshold", c.alpha_below_diffusion_threshold},
                         {"scale", scale_json(c.scale)}};
    }
    print_json(out);
    return ok ? kOk : kFailed;
}

struct DemoArgs {
    double p = 3.0, A = 2.0, eta = 1e-3;
    std::string svg, csv;
};

int cmd_sees_points(const DemoArgs& a) {
    experiments::TwoCaseInstance in;
    in.p = a.p;
    in.A = a.A;
    in.eta = a.eta;
    const auto o = experiments::run_two_case(in);
    Sink sink(a.csv);
    auto& os = *sink.os;
    os << "# p " << num(a.p) << " A " << num(a.A) << " eta " << num(a.eta) << " R " << num(o.k.R) << " r "
       << num(o.k.r) << " theta " << num(o.k.theta) << " eps " << num(o.k.eps) << '\n';
    os << "run,case,pass,bottom_min,witness,bound,witness_x,witness_t\n";
    auto row = [&](const char* name, const TwoCaseReport& r) {
        os << name << ',' << r.which_case << ',' << (r.pass ? 1 : 0) << ',' << num(r.bottom_min) << ','
           << num(r.witness) << ',' << num(r.bound) << ',' << num(r.witness_x.empty() ? 0.0 : r.witness_x[0]) << ','
           << num(r.witness_t) << '\n';
    };
    row("dip", o.dip);
    row("raised", o.raised);
    if (!a.svg.empty()) {
        std::ofstream svg(a.svg);
        require(static_cast<bool>(svg), Errc::InvalidInput, "cannot open '" + a.svg + "' for writing");
        cli::write_sees_points_svg(svg, o);
    }
    if (!o.constants_ok) std::fprintf(stderr, "lemma constants do not close: upper bound exceeds 1 - theta\n");
    return o.pass ? kOk : kFailed;
}

struct SweepArgs {
    std::string config, out;
};

int cmd_sweep(const SweepArgs& a) {
    const auto sc = cli::parse_sweep_config(cli::read_json(a.config));
    const auto& ins = sc.instances;
    // constants depend only on (p, A, eta); compute each once up front
    std::map<std::tuple<double, double, double>, std::optional<experiments::LemmaConstants>> lemma;
    std::map<std::tuple<double, double, double>, std::string> lemma_err;
    for (const auto& in : ins) {
        const auto key = std::make_tuple(in.p, in.A, in.eta);
        if (lemma.count(key)) continue;
        try {
            lemma[key] = experiments::lemma_constants(EquationParams(in.p, in.A, 0.0, 1), in.eta);
        } catch (const Error& e) {
            lemma[key] = std::nullopt;
            lemma_err[key] = e.what();
        }
    }
    std::vector<experiments::ImprovementOutcome> results(ins.size());
    const std::size_t workers = std::min(thread_cap(), std::max<std::size_t>(ins.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < ins.size(); i += workers) {
                const auto key = std::make_tuple(ins[i].p, ins[i].A, ins[i].eta);
                if (!lemma.at(key)) {
                    results[i].note = lemma_err.at(key);
                    continue;
                }
                try {
                    results[i] = experiments::run_improvement(ins[i], *lemma.at(key));
                } catch (const Error& e) {
                    results[i].note = e.what();
                }
            }
        });
    for (auto& t : pool) t.join();

    Sink sink(a.out);
    auto& os = *sink.os;
    os << "# seed " << sc.seed << "\n# instances " << ins.size() << '\n';
    os << "index,name,p,A,k,omega,gamma,m,seed,alpha,levels,iterate_pass,alpha_hat,max_fit_residual,pass,note\n";
    std::size_t passed = 0;
    for (std::size_t i = 0; i < ins.size(); ++i) {
        const auto& in = ins[i];
        const auto& r = results[i];
        passed += r.pass ? 1 : 0;
        std::string note = r.note;
        std::replace(note.begin(), note.end(), ',', ';');
        os << i << ',' << in.name << ',' << num(in.p) << ',' << num(in.A) << ',' << num(in.coeff.k) << ','
           << num(in.coeff.omega) << ',' << num(in.gamma) << ',' << (in.m ? num(*in.m) : "") << ',' << in.seed << ','
           << num(r.alpha) << ',' << r.iteration.levels.size() << ',' << (r.iteration.pass ? 1 : 0) << ','
           << num(r.fit.alpha_hat) << ',' << num(r.fit.max_fit_residual) << ',' << (r.pass ? 1 : 0) << ',' << note
           << '\n';
    }
    os << "# pass_rate " << passed << '/' << ins.size() << '\n';
    return passed == ins.size() ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Holder regularity toolkit for superquadratic Hamilton-Jacobi equations"};
    app.require_subcommand(1);
    int code = kOk;

    LegendreArgs lg;
    auto* legendre = app.add_subcommand("legendre", "closed-form Legendre transform against the brute-force oracle");
    legendre->add_option("--p", lg.p, "exponent p > 1")->required();
    legendre->add_option("--A", lg.A, "coefficient A > 0")->required();
    legendre->add_option("--shift", lg.shift, "constant h in H = h + A|xi|^p");
    legendre->add_option("--q-max", lg.q_max, "oracle samples cover |q| <= q-max");
    legendre->add_option("--samples", lg.samples, "number of oracle samples");
    legendre->callback([&] { code = cmd_legendre(lg); });

    auto* constants = app.add_subcommand("constants", "barrier constants");
    constants->require_subcommand(1);
    FirstOrderArgs fo;
    auto* first = constants->add_subcommand("first-order", "(T, theta, eps) and the three margins");
    first->add_option("--p", fo.p)->required();
    first->add_option("--A", fo.A)->required();
    first->add_option("--T", fo.T, "verify this T instead of computing one");
    first->add_option("--theta", fo.theta);
    first->add_option("--eps", fo.eps);
    first->callback([&] { code = cmd_first_order(fo); });
    LemmaArgs lm;
    auto* lemma = constants->add_subcommand("lemma", "constants shared by the two-case lemma");
    lemma->add_option("--p", lm.p)->required();
    lemma->add_option("--A", lm.A)->required();
    lemma->add_option("--eta", lm.eta);
    lemma->add_option("--margin", lm.margin, "upper-half budget, in (0, 1/2)");
    lemma->callback([&] { code = cmd_lemma(lm); });

    auto* barrier = app.add_subcommand("barrier", "barrier certificates");
    barrier->require_subcommand(1);
    BarrierArgs ba;
    auto* verify = barrier->add_subcommand("verify", "residual scan on a grid");
    verify->add_option("--kind", ba.kind, "super or sub")->required()->check(CLI::IsMember({"super", "sub"}));
    verify->add_option("--p", ba.p)->required();
    verify->add_option("--A", ba.A)->required();
    verify->add_option("--d", ba.d);
    verify->add_option("--eta", ba.eta, "supersolution family parameter");
    verify->add_option("--C", ba.C, "supersolution constant (searched if absent)");
    verify->add_option("--eps0", ba.eps0);
    verify->add_option("--R", ba.R, "subsolution radius");
    verify->add_option("--theta", ba.theta, "subsolution height (searched if absent)");
    verify->add_option("--eps", ba.eps);
    verify->add_option("--Cb", ba.Cb);
    verify->add_option("--x-max", ba.x_max, "grid covers |x_i| <= x-max");
    verify->add_option("--nx", ba.n_x, "nodes per space axis");
    verify->add_option("--t-min", ba.t_min);
    verify->add_option("--t-max", ba.t_max);
    verify->add_option("--nt", ba.n_t, "time nodes");
    verify->add_flag("--linear-time", ba.linear_time, "uniform instead of log-spaced time nodes");
    verify->add_option("--tol", ba.tol);
    verify->callback([&] { code = cmd_barrier(ba); });

    SolveArgs sv;
    auto* solve = app.add_subcommand("solve", "run the monotone scheme from a JSON config");
    solve->add_option("--config", sv.config)->required();
    solve->add_option("--out", sv.out, "grid file; .csv for text, binary otherwise")->required();
    solve->callback([&] { code = cmd_solve(sv); });

    OscillateArgs os;
    auto* osc = app.add_subcommand("oscillate", "oscillation decay, scale induction and Holder fit");
    osc->add_option("--in", os.in)->required();
    osc->add_option("--lambda", os.lambda)->required();
    osc->add_option("--theta", os.theta)->required();
    osc->add_option("--alpha", os.alpha, "default: largest admissible alpha");
    osc->add_option("--p", os.p);
    osc->add_option("--A", os.A);
    osc->add_option("--m", os.m, "integrability of the forcing");
    osc->add_option("--center", os.center);
    osc->add_option("--top", os.top, "top time of the outer cylinder (default: last time level)");
    osc->add_option("--r0", os.r0, "outer radius");
    osc->add_option("--floor-spacings", os.floor_spacings, "smallest radius in grid spacings");
    osc->add_option("--out", os.out, "CSV file (default stdout)");
    osc->callback([&] { code = cmd_oscillate(os); });

    ModulusArgs mo;
    auto* mod = app.add_subcommand("modulus", "two-point Holder modulus check");
    mod->add_option("--in", mo.in)->required();
    mod->add_option("--alpha", mo.alpha)->required();
    mod->add_option("--C", mo.C)->required();
    mod->add_option("--p", mo.p)->required();
    mod->add_option("--pairs", mo.pairs, "random pairs on top of nearest neighbors");
    mod->add_option("--seed", mo.seed);
    mod->callback([&] { code = cmd_modulus(mo); });

    ScaleArgs sa;
    auto* scale = app.add_subcommand("scale", "scaling exponents, beta window, admissible alpha");
    scale->add_option("--p", sa.p)->required();
    scale->add_option("--m", sa.m)->required();
    scale->add_option("--d", sa.d)->required();
    scale->add_option("--alpha", sa.alpha, "report the C^alpha rescaling at radius --r");
    scale->add_option("--r", sa.r);
    scale->add_option("--lambda", sa.lambda);
    scale->add_option("--theta", sa.theta, "report the admissible alpha for this theta");
    scale->callback([&] { code = cmd_scale(sa); });

    auto* demo = app.add_subcommand("demo", "demonstrations");
    demo->require_subcommand(1);
    DemoArgs da;
    auto* sees = demo->add_subcommand("sees-points", "small at one bottom point forces small inside");
    sees->add_option("--p", da.p)->required();
    sees->add_option("--A", da.A)->required();
    sees->add_option("--eta", da.eta);
    sees->add_option("--svg", da.svg, "write the figure here");
    sees->add_option("--csv", da.csv, "CSV file (default stdout)");
    sees->callback([&] { code = cmd_sees_points(da); });

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "improvement-of-oscillation sweep from a JSON config");
    sweep->add_option("--config", sw.config)->required();
    sweep->add_option("--out", sw.out, "CSV file (default stdout)");
    sweep->callback([&] { code = cmd_sweep(sw); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kBadInput;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_for(e.code());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kBadInput;
    }
    return code;
}
