#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qxi/errors.hpp"

namespace qxi {

inline constexpr long kDefaultNodeBudget = 16'000'000;

// Rectangular phase-space window sampled on nx * np nodes.
//
// Node (i, j) sits at (xmin + i*dx, pmin + j*dp); samples are node-centered,
// so both window edges carry nodes. Units are dimensionless phase-space
// quadratures with m = omega = hbar = 1.
struct GridGeometry {
    int nx = 0;
    int np = 0;
    double xmin = 0.0, xmax = 0.0;
    double pmin = 0.0, pmax = 0.0;

    GridGeometry() = default;
    GridGeometry(int nx_, int np_, double xmin_, double xmax_, double pmin_, double pmax_)
        : nx(nx_), np(np_), xmin(xmin_), xmax(xmax_), pmin(pmin_), pmax(pmax_) {
        validate();
    }

    // Symmetric window [-L, L]^2 with an odd node count per axis, so the
    // origin is a node and the node set is inversion-symmetric. The realized
    // spacing is the largest value <= target that divides L evenly.
    static GridGeometry centered(double half_width_x, double half_width_p,
                                 double dx_target, double dp_target) {
        const int hx = static_cast<int>(std::ceil(half_width_x / dx_target - 1e-12));
        const int hp = static_cast<int>(std::ceil(half_width_p / dp_target - 1e-12));
        return GridGeometry(2 * hx + 1, 2 * hp + 1, -half_width_x, half_width_x,
                            -half_width_p, half_width_p);
    }

    void validate() const {
        if (nx < 8 || np < 8)
            throw GridError("grid too small: need nx >= 8 and np >= 8, got nx=" +
                            std::to_string(nx) + " np=" + std::to_string(np));
        if (!(xmax > xmin) || !(pmax > pmin))
            throw GridError("grid window is empty: require xmax > xmin and pmax > pmin");
        if (!std::isfinite(xmin) || !std::isfinite(xmax) || !std::isfinite(pmin) ||
            !std::isfinite(pmax))
            throw GridError("grid window bounds must be finite");
    }

    double dx() const { return (xmax - xmin) / (nx - 1); }
    double dp() const { return (pmax - pmin) / (np - 1); }
    double cell_area() const { return dx() * dp(); }
    long node_count() const { return static_cast<long>(nx) * np; }

    double x(int i) const { return xmin + i * dx(); }
    double p(int j) const { return pmin + j * dp(); }

    // Row-major layout, rows indexed by j (fixed p), columns by i (x).
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * nx + i;
    }
    int x_index(std::size_t flat) const { return static_cast<int>(flat % nx); }
    int p_index(std::size_t flat) const { return static_cast<int>(flat / nx); }

    // Nearest node to an arbitrary point (clamped to the window).
    std::pair<int, int> nearest(double xq, double pq) const {
        auto clampi = [](long v, long lo, long hi) { return v < lo ? lo : (v > hi ? hi : v); };
        const long i = clampi(std::lround((xq - xmin) / dx()), 0, nx - 1);
        const long j = clampi(std::lround((pq - pmin) / dp()), 0, np - 1);
        return {static_cast<int>(i), static_cast<int>(j)};
    }

    bool operator==(const GridGeometry& o) const {
        return nx == o.nx && np == o.np && xmin == o.xmin && xmax == o.xmax &&
               pmin == o.pmin && pmax == o.pmax;
    }
};

// Which quasi-probability distribution a field's samples represent: the real
// order S <= 0 (0 = Wigner, -1 = Husimi), or "derived" for criterion-type
// fields that are not distributions.
struct DistributionOrder {
    bool derived = false;
    double s = 0.0;

    static DistributionOrder wigner() { return {false, 0.0}; }
    static DistributionOrder husimi() { return {false, -1.0}; }
    static DistributionOrder of(double s) {
        if (!std::isfinite(s)) throw SpecError("distribution order must be finite");
        return {false, s};
    }
    static DistributionOrder derived_field() { return {true, 0.0}; }

    bool is_wigner() const { return !derived && s == 0.0; }
    bool operator==(const DistributionOrder& o) const {
        return derived == o.derived && (derived || s == o.s);
    }
};

// A sampled real-valued function over a phase-space window. Immutable by
// convention once filled; all operations below treat fields as values.
struct ScalarField2D {
    GridGeometry geometry;
    DistributionOrder order;
    std::vector<double> values;

    ScalarField2D() = default;
    ScalarField2D(GridGeometry g, DistributionOrder ord)
        : geometry(g), order(ord), values(static_cast<std::size_t>(g.node_count()), 0.0) {}
    ScalarField2D(GridGeometry g, DistributionOrder ord, std::vector<double> v)
        : geometry(g), order(ord), values(std::move(v)) {
        if (values.size() != static_cast<std::size_t>(geometry.node_count()))
            throw GridError("field value count does not match geometry: expected " +
                            std::to_string(geometry.node_count()) + ", got " +
                            std::to_string(values.size()));
    }

    double& at(int i, int j) { return values[geometry.index(i, j)]; }
    double at(int i, int j) const { return values[geometry.index(i, j)]; }
};

inline void check_finite(const ScalarField2D& f) {
    for (std::size_t k = 0; k < f.values.size(); ++k)
        if (!std::isfinite(f.values[k]))
            throw GridError("non-finite field value at flat index " + std::to_string(k));
}

// Riemann rectangle quadrature, sum(values) * dx * dp.
//
// Fixed row-major order with Neumaier compensation: results are bit-stable
// across runs and deterministic to ~1e-12 relative regardless of how callers
// later parallelize field construction.
inline double compensated_sum(const std::vector<double>& v) {
    double sum = 0.0, comp = 0.0;
    for (double x : v) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

inline double integrate(const ScalarField2D& f) {
    return compensated_sum(f.values) * f.geometry.cell_area();
}

// Grid minimum and its node coordinates; ties resolve to the smallest
// row-major index.
struct MinLocation {
    double value = 0.0;
    double x = 0.0;
    double p = 0.0;
    int i = 0;
    int j = 0;
};

inline MinLocation field_minimum(const ScalarField2D& f) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < f.values.size(); ++k)
        if (f.values[k] < f.values[best]) best = k;
    MinLocation m;
    m.i = f.geometry.x_index(best);
    m.j = f.geometry.p_index(best);
    m.value = f.values[best];
    m.x = f.geometry.x(m.i);
    m.p = f.geometry.p(m.j);
    return m;
}

inline double ceil_to_half(double v) { return std::ceil(v * 2.0 - 1e-12) * 0.5; }

}  // namespace qxi
