/**
 * @file core.hpp
 * @brief Shared domain types: equation parameters, parabolic cylinders,
 *        space-time grid functions and oscillation over cylinders.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hjholder/error.hpp"

namespace hjholder {

using Point = std::vector<double>;

inline double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

inline double norm(std::span<const double> v) { return std::sqrt(norm2(v)); }

/**
 * Exponents and coefficients of the model pair of differential inequalities
 *   u_t + A|Du|^p - eps m^-(D^2u) + eps >= 0,
 *   u_t + (1/A)|Du|^p - eps m^+(D^2u) - eps <= 0.
 *
 * The conjugate exponent p' = p/(p-1) is always recomputed from p.
 */
class EquationParams {
public:
    EquationParams(double p, double A, double eps = 0.0, int d = 1,
                   std::optional<double> m = std::nullopt)
        : p_(p), A_(A), eps_(eps), d_(d), m_(m)
    {
        require(std::isfinite(p) && p > 1.0, Errc::DomainError, "p must be > 1");
        require(std::isfinite(A) && A > 0.0, Errc::DomainError, "A must be > 0");
        require(std::isfinite(eps) && eps >= 0.0, Errc::DomainError, "eps must be >= 0");
        require(d >= 1, Errc::DomainError, "dimension must be >= 1");
        if (m) require(std::isfinite(*m) && *m > 1.0, Errc::DomainError, "m must be > 1");
    }

    double p() const { return p_; }
    double p_prime() const { return p_ / (p_ - 1.0); }
    double A() const { return A_; }
    double eps() const { return eps_; }
    int d() const { return d_; }
    const std::optional<double>& m() const { return m_; }

    void require_superquadratic() const {
        require(p_ > 2.0, Errc::DomainError, "operation requires p > 2");
    }

    EquationParams with_A(double A) const { return {p_, A, eps_, d_, m_}; }
    EquationParams with_eps(double eps) const { return {p_, A_, eps, d_, m_}; }
    EquationParams with_d(int d) const { return {p_, A_, eps_, d, m_}; }

private:
    double p_;
    double A_;
    double eps_;
    int d_;
    std::optional<double> m_;
};

/// Open ball B_radius(center) times the closed time slab [t_lo, t_hi].
struct SpaceTimeRegion {
    Point center;
    double radius = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
};

/// Q_r(x,t) = B_r(x) x [t - r^beta, t].
class ParabolicCylinder {
public:
    ParabolicCylinder(Point center_x, double top_t, double radius, double beta)
        : center_(std::move(center_x)), top_t_(top_t), radius_(radius), beta_(beta)
    {
        require(!center_.empty(), Errc::DomainError, "cylinder center must have dimension >= 1");
        require(radius > 0.0 && std::isfinite(radius), Errc::DomainError, "cylinder radius must be > 0");
        require(beta > 0.0 && std::isfinite(beta), Errc::DomainError, "cylinder beta must be > 0");
    }

    const Point& center() const { return center_; }
    double top_t() const { return top_t_; }
    double radius() const { return radius_; }
    double beta() const { return beta_; }
    double height() const { return std::pow(radius_, beta_); }
    double bottom_t() const { return top_t_ - height(); }

    /// Same center, top and beta; radius scaled by lambda.
    ParabolicCylinder scaled(double lambda) const {
        return {center_, top_t_, lambda * radius_, beta_};
    }

    SpaceTimeRegion region() const { return {center_, radius_, bottom_t(), top_t_}; }

private:
    Point center_;
    double top_t_;
    double radius_;
    double beta_;
};

/**
 * Uniform space-time lattice over a box times an interval.
 *
 * Spatial node i along axis a sits at origin[a] + i * spacing[a]; time level k
 * sits at t0 + k * dt. Values are stored time-major with axis 0 fastest:
 *   linear = k * nodes_per_slice + (i0 + n0 * (i1 + n1 * (...))).
 */
class GridGeometry {
public:
    GridGeometry() = default;

    GridGeometry(Point origin, std::vector<double> spacing, std::vector<std::size_t> extent,
                 double t0, double dt, std::size_t nt)
        : origin_(std::move(origin)), spacing_(std::move(spacing)), extent_(std::move(extent)),
          t0_(t0), dt_(dt), nt_(nt)
    {
        require(!origin_.empty(), Errc::InvalidInput, "grid dimension must be >= 1");
        require(origin_.size() == spacing_.size() && origin_.size() == extent_.size(),
                Errc::InvalidInput, "grid origin/spacing/extent dimension mismatch");
        for (std::size_t a = 0; a < origin_.size(); ++a) {
            require(std::isfinite(origin_[a]), Errc::InvalidInput, "grid origin must be finite");
            require(spacing_[a] > 0.0 && std::isfinite(spacing_[a]), Errc::InvalidInput,
                    "grid spacing must be > 0");
            require(extent_[a] >= 1, Errc::InvalidInput, "grid extent must be >= 1");
        }
        require(std::isfinite(t0), Errc::InvalidInput, "grid time origin must be finite");
        require(dt > 0.0 && std::isfinite(dt), Errc::InvalidInput, "time spacing must be > 0");
        require(nt >= 1, Errc::InvalidInput, "time extent must be >= 1");
    }

    /// Box [lower, upper]^d with n nodes per axis, times [t_lo, t_hi] with nt levels.
    static GridGeometry box(std::span<const double> lower, std::span<const double> upper,
                            std::span<const std::size_t> n, double t_lo, double t_hi,
                            std::size_t nt) {
        require(lower.size() == upper.size() && lower.size() == n.size(), Errc::InvalidInput,
                "box dimension mismatch");
        std::vector<double> h(lower.size());
        for (std::size_t a = 0; a < lower.size(); ++a) {
            require(n[a] >= 2 && upper[a] > lower[a], Errc::InvalidInput, "degenerate box axis");
            h[a] = (upper[a] - lower[a]) / static_cast<double>(n[a] - 1);
        }
        require(nt >= 2 && t_hi > t_lo, Errc::InvalidInput, "degenerate time interval");
        return {Point(lower.begin(), lower.end()), std::move(h),
                std::vector<std::size_t>(n.begin(), n.end()), t_lo,
                (t_hi - t_lo) / static_cast<double>(nt - 1), nt};
    }

    /// Cube [lo, hi]^d with n nodes per axis.
    static GridGeometry cube(int d, double lo, double hi, std::size_t n, double t_lo,
                             double t_hi, std::size_t nt) {
        std::vector<double> l(static_cast<std::size_t>(d), lo), u(static_cast<std::size_t>(d), hi);
        std::vector<std::size_t> ns(static_cast<std::size_t>(d), n);
        return box(l, u, ns, t_lo, t_hi, nt);
    }

    std::size_t dim() const { return origin_.size(); }
    const Point& origin() const { return origin_; }
    const std::vector<double>& spacing() const { return spacing_; }
    const std::vector<std::size_t>& extent() const { return extent_; }
    double t0() const { return t0_; }
    double dt() const { return dt_; }
    std::size_t nt() const { return nt_; }

    std::size_t nodes_per_slice() const {
        std::size_t n = 1;
        for (auto e : extent_) n *= e;
        return n;
    }
    std::size_t size() const { return nodes_per_slice() * nt_; }

    double coord(std::size_t axis, std::size_t i) const {
        return origin_[axis] + static_cast<double>(i) * spacing_[axis];
    }
    double time(std::size_t k) const { return t0_ + static_cast<double>(k) * dt_; }
    double upper(std::size_t axis) const { return coord(axis, extent_[axis] - 1); }
    double t_end() const { return time(nt_ - 1); }
    double max_spacing() const { return *std::max_element(spacing_.begin(), spacing_.end()); }

    std::size_t linear(std::span<const std::size_t> idx, std::size_t k) const {
        std::size_t s = 0;
        for (std::size_t a = dim(); a-- > 0;) s = s * extent_[a] + idx[a];
        return k * nodes_per_slice() + s;
    }

    void unravel(std::size_t spatial, std::span<std::size_t> idx) const {
        for (std::size_t a = 0; a < dim(); ++a) {
            idx[a] = spatial % extent_[a];
            spatial /= extent_[a];
        }
    }

    void coords(std::span<const std::size_t> idx, std::span<double> x) const {
        for (std::size_t a = 0; a < dim(); ++a) x[a] = coord(a, idx[a]);
    }

    Point coords_of(std::size_t spatial) const {
        std::vector<std::size_t> idx(dim());
        unravel(spatial, idx);
        Point x(dim());
        coords(idx, x);
        return x;
    }

    bool same_lattice(const GridGeometry& o) const {
        return origin_ == o.origin_ && spacing_ == o.spacing_ && extent_ == o.extent_ &&
               t0_ == o.t0_ && dt_ == o.dt_ && nt_ == o.nt_;
    }

    /// Inclusive range of time levels inside [t_lo, t_hi]; empty if first > second.
    std::pair<std::ptrdiff_t, std::ptrdiff_t> time_range(double t_lo, double t_hi) const {
        const double tol = 1e-9 * dt_;
        auto lo = static_cast<std::ptrdiff_t>(std::ceil((t_lo - t0_ - tol) / dt_));
        auto hi = static_cast<std::ptrdiff_t>(std::floor((t_hi - t0_ + tol) / dt_));
        lo = std::max<std::ptrdiff_t>(lo, 0);
        hi = std::min<std::ptrdiff_t>(hi, static_cast<std::ptrdiff_t>(nt_) - 1);
        return {lo, hi};
    }

private:
    Point origin_;
    std::vector<double> spacing_;
    std::vector<std::size_t> extent_;
    double t0_ = 0.0;
    double dt_ = 1.0;
    std::size_t nt_ = 1;
};

/**
 * Visit every spatial node strictly inside the ball of the region.
 * fn(spatial_linear_index, coordinates).
 */
template <class Fn>
void for_each_spatial_node_in_ball(const GridGeometry& g, std::span<const double> center,
                                   double radius, Fn&& fn) {
    const std::size_t d = g.dim();
    require(center.size() == d, Errc::InvalidInput, "region dimension does not match grid");
    std::vector<std::size_t> lo(d), hi(d), idx(d);
    for (std::size_t a = 0; a < d; ++a) {
        const double h = g.spacing()[a];
        // widened by one node; the strict ball test below filters
        double l = std::ceil((center[a] - radius - g.origin()[a]) / h) - 1.0;
        double u = std::floor((center[a] + radius - g.origin()[a]) / h) + 1.0;
        l = std::max(l, 0.0);
        u = std::min(u, static_cast<double>(g.extent()[a] - 1));
        if (l > u) return;
        lo[a] = static_cast<std::size_t>(l);
        hi[a] = static_cast<std::size_t>(u);
    }
    const double r2 = radius * radius;
    Point x(d);
    idx = lo;
    while (true) {
        double dist2 = 0.0;
        for (std::size_t a = 0; a < d; ++a) {
            x[a] = g.coord(a, idx[a]);
            const double dx = x[a] - center[a];
            dist2 += dx * dx;
        }
        if (dist2 < r2) {
            fn(g.linear(idx, 0), std::span<const double>(x));
        }
        std::size_t a = 0;
        for (; a < d; ++a) {
            if (idx[a] < hi[a]) {
                ++idx[a];
                break;
            }
            idx[a] = lo[a];
        }
        if (a == d) break;
    }
}

/// Scalar function sampled on a GridGeometry. All values finite.
class GridFunction {
public:
    GridFunction() = default;

    GridFunction(GridGeometry geometry, std::vector<double> values)
        : geom_(std::move(geometry)), values_(std::move(values))
    {
        require(values_.size() == geom_.size(), Errc::InvalidInput,
                "value count does not match grid size");
        for (double v : values_) {
            require(std::isfinite(v), Errc::InvalidInput, "grid function values must be finite");
        }
    }

    /// Sample f(x, t) at every node.
    static GridFunction sample(const GridGeometry& g,
                               const std::function<double(std::span<const double>, double)>& f) {
        std::vector<double> vals(g.size());
        const std::size_t ns = g.nodes_per_slice();
        std::vector<std::size_t> idx(g.dim());
        Point x(g.dim());
        for (std::size_t s = 0; s < ns; ++s) {
            g.unravel(s, idx);
            g.coords(idx, x);
            for (std::size_t k = 0; k < g.nt(); ++k) vals[k * ns + s] = f(x, g.time(k));
        }
        return {g, std::move(vals)};
    }

    const GridGeometry& geometry() const { return geom_; }
    std::span<const double> values() const { return values_; }
    double at(std::size_t linear) const { return values_[linear]; }
    double at(std::span<const std::size_t> idx, std::size_t k) const {
        return values_[geom_.linear(idx, k)];
    }
    std::span<const double> slice(std::size_t k) const {
        const std::size_t ns = geom_.nodes_per_slice();
        return std::span<const double>(values_).subspan(k * ns, ns);
    }

    GridFunction map(const std::function<double(double)>& f) const {
        std::vector<double> out(values_.size());
        std::transform(values_.begin(), values_.end(), out.begin(), f);
        return {geom_, std::move(out)};
    }

private:
    GridGeometry geom_;
    std::vector<double> values_;
};

/// Visit every node (spatial index, time level, value) inside the region.
template <class Fn>
void for_each_node_in(const GridFunction& u, const SpaceTimeRegion& q, Fn&& fn) {
    const auto& g = u.geometry();
    const auto range = g.time_range(q.t_lo, q.t_hi);
    const auto k_lo = range.first, k_hi = range.second;
    if (k_lo > k_hi) return;
    const std::size_t ns = g.nodes_per_slice();
    for_each_spatial_node_in_ball(g, q.center, q.radius,
                                  [&](std::size_t s, std::span<const double> x) {
                                      for (auto k = k_lo; k <= k_hi; ++k) {
                                          const auto kk = static_cast<std::size_t>(k);
                                          fn(s, kk, x, u.at(kk * ns + s));
                                      }
                                  });
}

struct Extremes {
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    std::size_t count = 0;
    std::size_t argmin = 0;  // linear index
    std::size_t argmax = 0;
};

inline Extremes extremes_over(const GridFunction& u, const SpaceTimeRegion& q) {
    Extremes e;
    const std::size_t ns = u.geometry().nodes_per_slice();
    for_each_node_in(u, q, [&](std::size_t s, std::size_t k, std::span<const double>, double v) {
        if (v < e.min) { e.min = v; e.argmin = k * ns + s; }
        if (v > e.max) { e.max = v; e.argmax = k * ns + s; }
        ++e.count;
    });
    if (e.count == 0) raise(Errc::EmptyIntersection, "no grid node lies in the region");
    return e;
}

inline double osc_over_region(const GridFunction& u, const SpaceTimeRegion& q) {
    const auto e = extremes_over(u, q);
    return e.max - e.min;
}

/// max - min of u over the grid nodes inside q (open ball, closed time slab).
inline double osc_over_cylinder(const GridFunction& u, const ParabolicCylinder& q) {
    return osc_over_region(u, q.region());
}

/// u minus its minimum over the region; the result has minimum exactly 0 there.
inline GridFunction shift_normalize(const GridFunction& u, const SpaceTimeRegion& q) {
    const double lo = extremes_over(u, q).min;
    return u.map([lo](double v) { return v - lo; });
}

inline GridFunction shift_normalize(const GridFunction& u, const ParabolicCylinder& q) {
    return shift_normalize(u, q.region());
}

/// Empirical Hölder exponent and constant from per-cylinder oscillations.
struct HolderEstimate {
    std::vector<std::pair<double, double>> samples;  // (r_k, osc_k), r strictly decreasing
    double alpha_hat = std::numeric_limits<double>::quiet_NaN();
    double c_hat = std::numeric_limits<double>::quiet_NaN();
    double max_fit_residual = std::numeric_limits<double>::quiet_NaN();
    std::size_t used = 0;
};

}  // namespace hjholder
