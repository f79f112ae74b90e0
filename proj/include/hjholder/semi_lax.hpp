/**
 * @file semi_lax.hpp
 * @brief Min-of-translates upper bound built from the supersolution barrier:
 *   V(x,t) = min_{y in B_R} u(y,0) + U(x-y, t) + eps t.
 */

#pragma once

#include <limits>
#include <span>
#include <vector>

#include "hjholder/barriers.hpp"

namespace hjholder {

/// Bottom data u(y, 0) sampled at points of B_R.
struct BottomSamples {
    std::vector<Point> y;
    std::vector<double> value;
};

inline double semi_lax_upper_bound(const BottomSamples& bottom, double C, double eta, double eps,
                                   const EquationParams& params, std::span<const double> x, double t) {
    params.require_superquadratic();
    require(t > 0.0, Errc::DomainError, "semi-Lax bound requires t > 0");
    require(bottom.y.size() == bottom.value.size() && !bottom.y.empty(), Errc::InvalidInput,
            "bottom samples must be nonempty with matching sizes");
    const SupersolutionBarrier bar(C, eta, params.with_eps(eps));
    double best = std::numeric_limits<double>::infinity();
    Point diff(x.size());
    for (std::size_t i = 0; i < bottom.y.size(); ++i) {
        for (std::size_t a = 0; a < x.size(); ++a) diff[a] = x[a] - bottom.y[i][a];
        const double v = bottom.value[i] + bar.value(diff, t);
        if (v < best) best = v;
    }
    return best + eps * t;
}

/// Bottom samples of a grid function: nodes of B_R(0) on its first time level.
inline BottomSamples bottom_of(const GridFunction& u, double R) {
    BottomSamples out;
    const auto& g = u.geometry();
    const Point origin(g.dim(), 0.0);
    for_each_spatial_node_in_ball(g, origin, R, [&](std::size_t s, std::span<const double> x) {
        out.y.emplace_back(x.begin(), x.end());
        out.value.push_back(u.at(s));
    });
    return out;
}

}  // namespace hjholder
