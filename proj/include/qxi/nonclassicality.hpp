#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "json.hpp"
#include "qxi/errors.hpp"
#include "qxi/grid.hpp"
#include "qxi/transforms.hpp"

namespace qxi {

// The (S, k) pair selecting one member of the two-parameter criterion family.
// S <= 0 keeps every required order reachable by smoothing from a measured
// Wigner field; k is strictly inside (0, 1).
struct CriterionParams {
    double S = 0.0;
    double k = 0.5;

    CriterionParams() = default;
    CriterionParams(double S_, double k_) : S(S_), k(k_) {
        if (S > 0.0)
            throw SpecError("criterion order S must be <= 0 (S > 0 needs deconvolution)");
        if (!(k > 0.0) || !(k < 1.0)) throw SpecError("criterion weight k must lie in (0, 1)");
    }

    double order_k() const { return 1.0 - (1.0 - S) / k; }
    double order_one_minus_k() const { return 1.0 - (1.0 - S) / (1.0 - k); }
    double prefactor() const { return std::numbers::pi * (1.0 - S) / (k * (1.0 - k)); }
    bool is_default() const { return S == 0.0 && k == 0.5; }
};

// xi(x, p) = W - 4 pi Q^2 with Q the order -1 smoothing of W. Negative values
// anywhere certify nonclassicality; identically zero for coherent states.
inline ScalarField2D xi_field(const ScalarField2D& w,
                              ConvolutionBackend backend = ConvolutionBackend::spectral) {
    if (!w.order.is_wigner()) throw TransformError("criterion field requires a Wigner input");
    const ScalarField2D q = smooth(w, -1.0, backend);
    ScalarField2D out(w.geometry, DistributionOrder::derived_field());
    constexpr double four_pi = 4.0 * std::numbers::pi;
    for (std::size_t idx = 0; idx < out.values.size(); ++idx)
        out.values[idx] = w.values[idx] - four_pi * q.values[idx] * q.values[idx];
    return out;
}

// Generalized criterion xi^[S,k] = P_S - pi(1-S)/(k(1-k)) P_{S_k} P_{S_{1-k}},
// with S_k = 1 - (1-S)/k. At (0, 1/2) this reproduces xi_field bit for bit:
// the prefactor evaluates to exactly 4 pi and both product orders are -1.
inline ScalarField2D xi_sk_field(const ScalarField2D& w, const CriterionParams& params,
                                 ConvolutionBackend backend = ConvolutionBackend::spectral) {
    if (!w.order.is_wigner()) throw TransformError("criterion field requires a Wigner input");
    const ScalarField2D ps = smooth(w, params.S, backend);
    const ScalarField2D pa = smooth(w, params.order_k(), backend);
    const ScalarField2D pb = (params.order_k() == params.order_one_minus_k())
                                 ? pa
                                 : smooth(w, params.order_one_minus_k(), backend);
    const double pref = params.prefactor();
    ScalarField2D out(w.geometry, DistributionOrder::derived_field());
    for (std::size_t idx = 0; idx < out.values.size(); ++idx)
        out.values[idx] = ps.values[idx] - pref * pa.values[idx] * pb.values[idx];
    return out;
}

// Mask tolerance: |xi| below 1e-12 of the field's own scale counts as zero,
// so states sitting exactly on the classical dividing line do not pick up a
// spurious measure from roundoff.
inline double zero_snap_threshold(const ScalarField2D& xi) {
    double m = 0.0;
    for (double v : xi.values) m = std::max(m, std::abs(v));
    return 1e-12 * m;
}

// Five-point stencil in the interior; the outermost ring falls back to the
// one-sided second difference (exact for quadratics, and window construction
// keeps edge values negligible anyway).
inline ScalarField2D laplacian(const ScalarField2D& f) {
    const GridGeometry& g = f.geometry;
    const double ax = 1.0 / (g.dx() * g.dx());
    const double ap = 1.0 / (g.dp() * g.dp());
    ScalarField2D out(g, DistributionOrder::derived_field());
    for (int j = 0; j < g.np; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int ic = (i == 0) ? 1 : (i == g.nx - 1 ? g.nx - 2 : i);
            const int jc = (j == 0) ? 1 : (j == g.np - 1 ? g.np - 2 : j);
            const double dxx = f.at(ic + 1, j) - 2.0 * f.at(ic, j) + f.at(ic - 1, j);
            const double dpp = f.at(i, jc + 1) - 2.0 * f.at(i, jc) + f.at(i, jc - 1);
            out.at(i, j) = ax * dxx + ap * dpp;
        }
    }
    return out;
}

inline long negative_node_count(const ScalarField2D& xi) {
    const double tau = zero_snap_threshold(xi);
    long count = 0;
    for (double v : xi.values)
        if (v < -tau) ++count;
    return count;
}

// The quantumness measure: curvature of xi summed over the nodes where
// xi < 0 (strict, after zero-snap), times the cell area. The stencil sees all
// neighbor values; only the contribution mask is restricted. Fixed-order
// compensated reduction keeps reports bit-stable.
inline double big_xi(const ScalarField2D& xi) {
    const double tau = zero_snap_threshold(xi);
    const ScalarField2D lap = laplacian(xi);
    double sum = 0.0, comp = 0.0;
    for (std::size_t idx = 0; idx < xi.values.size(); ++idx) {
        if (!(xi.values[idx] < -tau)) continue;
        const double x = lap.values[idx];
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return (sum + comp) * xi.geometry.cell_area();
}

inline double big_xi_sk(const ScalarField2D& w, const CriterionParams& params,
                        ConvolutionBackend backend = ConvolutionBackend::spectral) {
    return big_xi(xi_sk_field(w, params, backend));
}

// Grid minimum of xi; optionally sharpened by a per-axis quadratic fit
// through the minimum node (off by default so reported landmarks come from
// the documented plain grid scan).
inline MinLocation xi_minimum(const ScalarField2D& xi, bool subgrid_refine = false) {
    MinLocation m = field_minimum(xi);
    if (!subgrid_refine) return m;
    const GridGeometry& g = xi.geometry;
    if (m.i <= 0 || m.i >= g.nx - 1 || m.j <= 0 || m.j >= g.np - 1) return m;
    const double f0 = xi.at(m.i, m.j);
    auto refine_axis = [f0](double fm, double fp, double delta, double& shift, double& drop) {
        const double curv = fm - 2.0 * f0 + fp;
        if (curv <= 0.0) return;
        shift = 0.5 * (fm - fp) / curv * delta;
        drop = -(fm - fp) * (fm - fp) / (8.0 * curv);
    };
    double sx = 0.0, dxv = 0.0, sp = 0.0, dpv = 0.0;
    refine_axis(xi.at(m.i - 1, m.j), xi.at(m.i + 1, m.j), g.dx(), sx, dxv);
    refine_axis(xi.at(m.i, m.j - 1), xi.at(m.i, m.j + 1), g.dp(), sp, dpv);
    m.x += sx;
    m.p += sp;
    m.value = f0 + dxv + dpv;
    return m;
}

// Curvature-based comparison measure of the form integral of W (Lap W / 2 - W),
// scaled and offset so every coherent state scores exactly zero (the raw
// Gaussian integrals give -1/pi there).
inline double lee_jeong(const ScalarField2D& w) {
    if (!w.order.is_wigner())
        throw TransformError("the comparison measure requires a Wigner input");
    const ScalarField2D lap = laplacian(w);
    std::vector<double> integrand(w.values.size());
    for (std::size_t idx = 0; idx < w.values.size(); ++idx)
        integrand[idx] = w.values[idx] * (0.5 * lap.values[idx] - w.values[idx]);
    const double raw = compensated_sum(integrand) * w.geometry.cell_area();
    return -(std::numbers::pi / 2.0) * raw - 0.5;
}

// Largest |grad xi| over nodes flanking the xi = 0 level set. A negative
// region with no detectable boundary (all nodes negative, or boundary
// gradients identically zero) is flagged rather than silently scored zero.
struct BoundaryDiagnostic {
    double max_boundary_gradient = 0.0;
    bool degenerate = false;
};

inline BoundaryDiagnostic boundary_gradient_diagnostic(const ScalarField2D& xi) {
    const GridGeometry& g = xi.geometry;
    const double tau = zero_snap_threshold(xi);
    auto negative = [&](int i, int j) { return xi.at(i, j) < -tau; };
    auto grad_mag = [&](int i, int j) {
        const int il = std::max(i - 1, 0), ir = std::min(i + 1, g.nx - 1);
        const int jl = std::max(j - 1, 0), jr = std::min(j + 1, g.np - 1);
        const double gx = (xi.at(ir, j) - xi.at(il, j)) / ((ir - il) * g.dx());
        const double gp = (xi.at(i, jr) - xi.at(i, jl)) / ((jr - jl) * g.dp());
        return std::hypot(gx, gp);
    };
    BoundaryDiagnostic d;
    bool any_negative = false, any_boundary = false;
    for (int j = 0; j < g.np; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (!negative(i, j)) continue;
            any_negative = true;
            const bool at_boundary =
                (i > 0 && !negative(i - 1, j)) || (i < g.nx - 1 && !negative(i + 1, j)) ||
                (j > 0 && !negative(i, j - 1)) || (j < g.np - 1 && !negative(i, j + 1));
            if (!at_boundary) continue;
            any_boundary = true;
            d.max_boundary_gradient = std::max(d.max_boundary_gradient, grad_mag(i, j));
            // neighbors on the nonnegative side of the crossing
            if (i > 0 && !negative(i - 1, j))
                d.max_boundary_gradient = std::max(d.max_boundary_gradient, grad_mag(i - 1, j));
            if (i < g.nx - 1 && !negative(i + 1, j))
                d.max_boundary_gradient = std::max(d.max_boundary_gradient, grad_mag(i + 1, j));
            if (j > 0 && !negative(i, j - 1))
                d.max_boundary_gradient = std::max(d.max_boundary_gradient, grad_mag(i, j - 1));
            if (j < g.np - 1 && !negative(i, j + 1))
                d.max_boundary_gradient = std::max(d.max_boundary_gradient, grad_mag(i, j + 1));
        }
    }
    d.degenerate = any_negative && !any_boundary;
    return d;
}

// Bundled outputs of one criterion evaluation.
struct MeasureReport {
    double xi_min = 0.0;
    double xi_min_x = 0.0;
    double xi_min_p = 0.0;
    double big_xi = 0.0;
    double lee_jeong = 0.0;
    long negative_node_count = 0;
    GridGeometry geometry;
    double S = 0.0;
    double k = 0.5;

    nlohmann::json to_json() const {
        return nlohmann::json{{"xi_min", xi_min},
                              {"xi_min_x", xi_min_x},
                              {"xi_min_p", xi_min_p},
                              {"big_xi", big_xi},
                              {"lee_jeong", lee_jeong},
                              {"negative_node_count", negative_node_count},
                              {"nx", geometry.nx},
                              {"np", geometry.np},
                              {"xmin", geometry.xmin},
                              {"xmax", geometry.xmax},
                              {"pmin", geometry.pmin},
                              {"pmax", geometry.pmax},
                              {"S", S},
                              {"k", k}};
    }
};

inline MeasureReport measure(const ScalarField2D& w, const CriterionParams& params = {},
                             ConvolutionBackend backend = ConvolutionBackend::spectral,
                             bool subgrid_refine = false) {
    if (!w.order.is_wigner())
        throw TransformError("measure requires a Wigner-order grid (order 0)");
    const ScalarField2D xi =
        params.is_default() ? xi_field(w, backend) : xi_sk_field(w, params, backend);
    MeasureReport r;
    const MinLocation m = xi_minimum(xi, subgrid_refine);
    r.xi_min = m.value;
    r.xi_min_x = m.x;
    r.xi_min_p = m.p;
    r.big_xi = big_xi(xi);
    r.lee_jeong = lee_jeong(w);
    r.negative_node_count = negative_node_count(xi);
    r.geometry = w.geometry;
    r.S = params.S;
    r.k = params.k;
    return r;
}

}  // namespace qxi
