#pragma once

// JSON run configs for `solve` and `sweep`, and the SVG figure for the
// sees-points demo. Layout of both config files is in docs/config.md.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hjholder/experiments.hpp"
#include "hjholder/scheme.hpp"

namespace hjholder::cli {

using nlohmann::json;

inline json read_json(const std::string& path) {
    std::ifstream is(path);
    require(static_cast<bool>(is), Errc::InvalidInput, "cannot open config '" + path + "'");
    try {
        return json::parse(is);
    } catch (const json::exception& e) {
        raise(Errc::InvalidInput, "config '" + path + "': " + e.what());
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        raise(Errc::InvalidInput, std::string("config field '") + key + "' has the wrong type");
    }
}

inline void known_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
    if (!j.is_object()) raise(Errc::InvalidInput, where + " must be an object");
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* key : keys) ok = ok || k == key;
        require(ok, Errc::InvalidInput, "unknown key '" + k + "' in " + where);
    }
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

struct RunConfig {
    HamiltonianSpec spec;
    SpaceFn init;
    SolveConfig solver;
    std::uint64_t seed = 1;
};

inline GridGeometry parse_grid(const json& g) {
    known_keys(g, {"d", "lo", "hi", "n", "t0", "t1", "nt"}, "grid");
    const int d = get_or(g, "d", 1);
    require(d >= 1 && d <= 3, Errc::InvalidInput, "grid.d must be 1, 2 or 3");
    const double lo = get_or(g, "lo", -1.0), hi = get_or(g, "hi", 1.0);
    const auto n = get_or<std::size_t>(g, "n", 129);
    const double t0 = get_or(g, "t0", 0.0), t1 = get_or(g, "t1", 1.0);
    const auto nt = get_or<std::size_t>(g, "nt", 33);
    require(hi > lo && t1 > t0 && n >= 3 && nt >= 2, Errc::InvalidInput, "grid needs lo < hi, t0 < t1, n >= 3, nt >= 2");
    return GridGeometry::cube(d, lo, hi, n, t0, t1, nt);
}

inline SpaceFn parse_initial(const json& j, std::size_t d, std::uint64_t seed) {
    const auto kind = get_or<std::string>(j, "kind", "random_smooth");
    if (kind == "random_smooth") {
        known_keys(j, {"kind", "modes", "frequency", "lo", "hi"}, "initial");
        return experiments::random_smooth_data(seed, d, get_or<std::size_t>(j, "modes", 4), get_or(j, "lo", 0.0),
                                               get_or(j, "hi", 1.0), get_or(j, "frequency", 1.0));
    }
    if (kind == "quadratic") {
        known_keys(j, {"kind", "scale"}, "initial");
        const double s = get_or(j, "scale", 1.0);
        return [s](std::span<const double> x) { return s * norm2(x); };
    }
    if (kind == "constant") {
        known_keys(j, {"kind", "value"}, "initial");
        const double v = get_or(j, "value", 0.0);
        return [v](std::span<const double>) { return v; };
    }
    if (kind == "abs_power") {
        known_keys(j, {"kind", "alpha"}, "initial");
        const double a = get_or(j, "alpha", 0.5);
        require(a > 0.0, Errc::InvalidInput, "initial.alpha must be > 0");
        return [a](std::span<const double> x) { return std::pow(norm(x), a); };
    }
    raise(Errc::InvalidInput, "unknown initial.kind '" + kind + "'");
}

inline HamiltonianSpec parse_equation(const json& e, double h) {
    known_keys(e, {"p", "A", "coefficient", "diffusion", "forcing", "shift"}, "equation");
    HamiltonianSpec spec;
    spec.p = get_or(e, "p", 3.0);
    spec.A = get_or(e, "A", 2.0);
    spec.shift = get_or(e, "shift", 0.0);
    const json none = json::object();

    const json& c = e.contains("coefficient") ? e.at("coefficient") : none;
    const auto ck = get_or<std::string>(c, "kind", "constant");
    if (ck == "rough") {
        known_keys(c, {"kind", "k", "omega", "amplitude"}, "equation.coefficient");
        const double amp = get_or(c, "amplitude", 0.5);
        require(amp >= 0.0 && amp < 1.0, Errc::InvalidInput, "coefficient amplitude must lie in [0, 1)");
        spec.grad_coeff = rough_coefficient(get_or(c, "k", 10.0), get_or(c, "omega", 7.0), amp);
    } else {
        require(ck == "constant", Errc::InvalidInput, "unknown coefficient.kind '" + ck + "'");
        known_keys(c, {"kind"}, "equation.coefficient");
        spec.grad_coeff_time_independent = true;
    }

    const json& df = e.contains("diffusion") ? e.at("diffusion") : none;
    known_keys(df, {"kind", "eps"}, "equation.diffusion");
    const auto dk = get_or<std::string>(df, "kind", "none");
    spec.diffusion_eps = get_or(df, "eps", 0.0);
    if (dk == "none") spec.diffusion = DiffusionKind::None;
    else if (dk == "extremal_plus") spec.diffusion = DiffusionKind::ExtremalPlus;
    else if (dk == "extremal_minus") spec.diffusion = DiffusionKind::ExtremalMinus;
    else raise(Errc::InvalidInput, "unknown diffusion.kind '" + dk + "'");

    const json& f = e.contains("forcing") ? e.at("forcing") : none;
    const auto fk = get_or<std::string>(f, "kind", "none");
    if (fk == "constant") {
        known_keys(f, {"kind", "M"}, "equation.forcing");
        const double M = get_or(f, "M", 0.0);
        spec.forcing = [M](std::span<const double>, double) { return M; };
        spec.forcing_time_independent = true;
    } else if (fk == "singular") {
        known_keys(f, {"kind", "M", "gamma", "x0"}, "equation.forcing");
        const auto x0 = get_or<std::vector<double>>(f, "x0", {0.0});
        spec.forcing = singular_forcing(get_or(f, "M", 0.1), get_or(f, "gamma", 0.4), x0, 0.5 * h);
        spec.forcing_time_independent = true;
    } else {
        require(fk == "none", Errc::InvalidInput, "unknown forcing.kind '" + fk + "'");
    }
    spec.validate();
    return spec;
}

inline RunConfig parse_run_config(const json& j) {
    known_keys(j, {"seed", "equation", "grid", "initial", "solver"}, "config");
    RunConfig rc;
    rc.seed = get_or<std::uint64_t>(j, "seed", 1);
    const json none = json::object();
    rc.solver.grid = parse_grid(j.contains("grid") ? j.at("grid") : none);
    rc.spec = parse_equation(j.contains("equation") ? j.at("equation") : none, rc.solver.grid.max_spacing());
    rc.init = parse_initial(j.contains("initial") ? j.at("initial") : none, rc.solver.grid.dim(), rc.seed);
    const json& s = j.contains("solver") ? j.at("solver") : none;
    known_keys(s, {"cfl", "lf_safety", "lf_floor", "lf_cap", "dt_floor"}, "solver");
    rc.solver.cfl = get_or(s, "cfl", rc.solver.cfl);
    rc.solver.lf_safety = get_or(s, "lf_safety", rc.solver.lf_safety);
    rc.solver.lf_floor = get_or(s, "lf_floor", rc.solver.lf_floor);
    rc.solver.lf_cap = get_or(s, "lf_cap", rc.solver.lf_cap);
    rc.solver.dt_floor = get_or(s, "dt_floor", rc.solver.dt_floor);
    return rc;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepConfig {
    std::uint64_t seed = 1;
    std::vector<experiments::ImprovementInstance> instances;
};

/// Cartesian product over the listed axes on top of one base instance.
inline SweepConfig parse_sweep_config(const json& j) {
    known_keys(j, {"seed", "base", "sweep"}, "sweep config");
    SweepConfig out;
    out.seed = get_or<std::uint64_t>(j, "seed", 1);
    const json none = json::object();
    const json& b = j.contains("base") ? j.at("base") : none;
    known_keys(b, {"p", "A", "k", "omega", "amplitude", "forcing", "M", "gamma", "x0", "m", "modes", "frequency", "n",
                   "nt", "lambda", "eta"},
               "sweep.base");
    experiments::ImprovementInstance base;
    base.p = get_or(b, "p", base.p);
    base.A = get_or(b, "A", base.A);
    base.coeff.k = get_or(b, "k", base.coeff.k);
    base.coeff.omega = get_or(b, "omega", base.coeff.omega);
    base.coeff.amp = get_or(b, "amplitude", base.coeff.amp);
    const auto fk = get_or<std::string>(b, "forcing", "none");
    if (fk == "none") base.forcing = experiments::ForcingKind::None;
    else if (fk == "constant") base.forcing = experiments::ForcingKind::Constant;
    else if (fk == "singular") base.forcing = experiments::ForcingKind::Singular;
    else raise(Errc::InvalidInput, "unknown sweep.base.forcing '" + fk + "'");
    base.M = get_or(b, "M", base.M);
    base.gamma = get_or(b, "gamma", base.gamma);
    base.x0 = get_or(b, "x0", base.x0);
    if (b.contains("m")) base.m = get_or(b, "m", 2.0);
    base.modes = get_or(b, "modes", base.modes);
    base.frequency = get_or(b, "frequency", base.frequency);
    base.n = get_or(b, "n", base.n);
    base.nt = get_or(b, "nt", base.nt);
    base.lambda = get_or(b, "lambda", base.lambda);
    base.eta = get_or(b, "eta", base.eta);
    require(base.n >= 17 && base.nt >= 3, Errc::InvalidInput, "sweep.base needs n >= 17 and nt >= 3");

    const json& s = j.contains("sweep") ? j.at("sweep") : none;
    known_keys(s, {"p", "A", "k", "omega", "gamma", "m"}, "sweep.sweep");
    auto axis = [&](const char* key, double fallback) {
        auto v = get_or<std::vector<double>>(s, key, {fallback});
        require(!v.empty(), Errc::InvalidInput, std::string("sweep axis '") + key + "' is empty");
        return v;
    };
    const auto ps = axis("p", base.p), As = axis("A", base.A), ks = axis("k", base.coeff.k),
               ws = axis("omega", base.coeff.omega), gs = axis("gamma", base.gamma);
    const bool sweep_m = s.contains("m");
    const auto ms = sweep_m ? axis("m", 2.0) : std::vector<double>{0.0};
    const bool sweep_gamma = s.contains("gamma");

    for (double p : ps)
        for (double A : As)
            for (double k : ks)
                for (double w : ws)
                    for (double g : gs)
                        for (double m : ms) {
                            auto in = base;
                            in.p = p;
                            in.A = A;
                            in.coeff.k = k;
                            in.coeff.omega = w;
                            in.gamma = g;
                            if (sweep_gamma) in.forcing = experiments::ForcingKind::Singular;
                            if (sweep_m) in.m = m;
                            in.seed = out.seed + out.instances.size();
                            char name[160];
                            std::snprintf(name, sizeof name, "p%g-A%g-k%g-w%g-g%g-m%g", p, A, k, w, g,
                                          in.m ? *in.m : 0.0);
                            in.name = name;
                            out.instances.push_back(in);
                        }
    return out;
}

// ---------------------------------------------------------------------------
// SVG for the sees-points demo
// ---------------------------------------------------------------------------

namespace detail {

/// Dark blue -> teal -> yellow.
inline std::string ramp_color(double s) {
    s = std::clamp(s, 0.0, 1.0);
    const double stops[3][3] = {{68, 1, 84}, {33, 145, 140}, {253, 231, 37}};
    const int i = s < 0.5 ? 0 : 1;
    const double w = s < 0.5 ? 2.0 * s : 2.0 * s - 1.0;
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(stops[i][0] + w * (stops[i + 1][0] - stops[i][0]))),
                  static_cast<int>(std::lround(stops[i][1] + w * (stops[i + 1][1] - stops[i][1]))),
                  static_cast<int>(std::lround(stops[i][2] + w * (stops[i + 1][2] - stops[i][2]))));
    return buf;
}

struct Panel {
    const GridFunction* u;
    double ox, oy, w, h;
    double target_radius;  // B_R or B_{R/2}
    std::string title;
    std::string verdict;
};

inline void draw_panel(std::ostream& os, const Panel& pn, double R) {
    const auto& g = pn.u->geometry();
    const std::size_t nx = g.extent()[0], nt = g.nt();
    double lo = INFINITY, hi = -INFINITY;
    for (double v : pn.u->values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi > lo ? hi - lo : 1.0;
    const double cw = pn.w / static_cast<double>(nx), ch = pn.h / static_cast<double>(nt);
    char buf[256];
    // 64 color levels; horizontal runs of one level become one rect
    auto level = [&](std::size_t k, std::size_t i) {
        return static_cast<int>(std::lround(63.0 * (pn.u->at(k * nx + i) - lo) / span));
    };
    for (std::size_t k = 0; k < nt; ++k)
        for (std::size_t i = 0; i < nx;) {
            const int c = level(k, i);
            std::size_t j = i + 1;
            while (j < nx && level(k, j) == c) ++j;
            std::snprintf(buf, sizeof buf, "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"%s\"/>\n",
                          pn.ox + static_cast<double>(i) * cw, pn.oy + static_cast<double>(nt - 1 - k) * ch,
                          static_cast<double>(j - i) * cw + 0.1, ch + 0.1, ramp_color(c / 63.0).c_str());
            os << buf;
            i = j;
        }
    const double x0 = g.coord(0, 0), x1 = g.upper(0);
    auto px = [&](double x) { return pn.ox + (x - x0) / (x1 - x0) * pn.w; };
    auto py = [&](double t) { return pn.oy + (1.0 - t) * pn.h; };
    // target set: radius x [1/2, 1]
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" stroke=\"white\" "
                  "stroke-width=\"1.5\" stroke-dasharray=\"5,3\"/>\n",
                  px(-pn.target_radius), py(1.0), px(pn.target_radius) - px(-pn.target_radius), py(0.5) - py(1.0));
    os << buf;
    // bottom of B_R
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#ff5555\" stroke-width=\"3\"/>\n",
                  px(-R), py(0.0) - 1.5, px(R), py(0.0) - 1.5);
    os << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"13\">%s</text>\n", pn.ox, pn.oy - 24.0,
                  pn.title.c_str());
    os << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\">%s</text>\n", pn.ox, pn.oy - 8.0,
                  pn.verdict.c_str());
    os << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" font-size=\"10\">x in [%.3f, %.3f], t up; color %.3g..%.3g</text>\n",
                  pn.ox, pn.oy + pn.h + 14.0, x0, x1, lo, hi);
    os << buf;
}

}  // namespace detail

/**
 * Two heat maps of u(x, t): the dip run with its case-1 target B_R x [1/2, 1]
 * and the raised run with its case-2 target B_{R/2} x [1/2, 1]. The red bar
 * marks the bottom of B_R.
 */
inline void write_sees_points_svg(std::ostream& os, const experiments::TwoCaseOutcome& o) {
    const double W = 380.0, H = 300.0, pad = 50.0;
    char head[256];
    std::snprintf(head, sizeof head,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" font-family=\"sans-serif\">\n",
                  3.0 * pad + 2.0 * W, 2.0 * pad + H + 20.0);
    os << head << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    char v1[160], v2[160];
    std::snprintf(v1, sizeof v1, "case %d: max %.4f &lt;= 1 - theta = %.4f  %s", o.dip.which_case, o.dip.witness,
                  o.dip.bound, o.dip.pass ? "holds" : "FAILS");
    std::snprintf(v2, sizeof v2, "case %d: min %.3g &gt;= theta/2 = %.3g  %s", o.raised.which_case, o.raised.witness,
                  o.raised.bound, o.raised.pass ? "holds" : "FAILS");
    detail::draw_panel(os, {&o.u_dip, pad, pad, W, H, o.k.R, "small at one bottom point", v1}, o.k.R);
    detail::draw_panel(os, {&o.u_raised, 2.0 * pad + W, pad, W, H, 0.5 * o.k.R, "bottom raised above theta", v2},
                       o.k.R);
    os << "</svg>\n";
}

}  // namespace hjholder::cli
