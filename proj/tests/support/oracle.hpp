#pragma once

// Slow reference implementations used only by the test suite to validate the
// fast paths. Deliberately naive; kept out of the shipped headers.

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "qxi/qxi.hpp"

namespace qxi::oracle {

struct OracleConfig {
    int quadrature_refinement = 2;  // grid-halving factor, >= 2
    double window_growth = 1.5;
};

// Untruncated kernel, plain O(N^2 * N^2) double sum over the window. The two
// axis factors are memoized (the kernel is separable), but the summation is
// exactly the naive quadrature of the order-lowering integral.
inline ScalarField2D direct_convolution(const ScalarField2D& field, double target_order) {
    if (field.order.derived) throw TransformError("cannot smooth a derived field");
    const SmoothingJob job(field.order.s, target_order);
    if (job.is_identity()) return field;
    const GridGeometry& g = field.geometry;
    const double n2 = static_cast<double>(g.node_count()) * g.node_count();
    if (n2 > 9e9)
        throw GridError("node budget: direct convolution oracle limited to ~3e9 pair sums");

    const double t = job.width();
    std::vector<double> kx(g.nx), kp(g.np);
    for (int d = 0; d < g.nx; ++d) kx[d] = std::exp(-(d * g.dx()) * (d * g.dx()) / t);
    for (int d = 0; d < g.np; ++d) kp[d] = std::exp(-(d * g.dp()) * (d * g.dp()) / t);
    const double pref = g.cell_area() / (std::numbers::pi * t);

    ScalarField2D out(g, DistributionOrder::of(target_order));
    for (int j = 0; j < g.np; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            double acc = 0.0;
            for (int l = 0; l < g.np; ++l) {
                const double wp = kp[std::abs(j - l)];
                double row = 0.0;
                for (int m = 0; m < g.nx; ++m)
                    row += field.at(m, l) * kx[std::abs(i - m)];
                acc += wp * row;
            }
            out.at(i, j) = pref * acc;
        }
    }
    return out;
}

// Recompute the full pipeline on a refinement-times finer grid over a 1.5x
// larger window; landmark values must not move beyond their tolerances.
inline MeasureReport refined_measure(const StateSpec& spec, const CriterionParams& params,
                                     const OracleConfig& cfg = {},
                                     std::optional<GridGeometry> base = {},
                                     double eta = 1.0,
                                     long node_budget = kDefaultNodeBudget) {
    if (cfg.quadrature_refinement < 2)
        throw SpecError("oracle refinement must be at least 2");
    const GridGeometry g0 = base ? *base : auto_geometry(spec, {}, node_budget);
    const double lx = ceil_to_half(cfg.window_growth * std::max(-g0.xmin, g0.xmax));
    const double lp = ceil_to_half(cfg.window_growth * std::max(-g0.pmin, g0.pmax));
    const GridGeometry fine = GridGeometry::centered(
        lx, lp, g0.dx() / cfg.quadrature_refinement, g0.dp() / cfg.quadrature_refinement);
    if (fine.node_count() > node_budget)
        throw GridError("node budget: refined grid needs " + std::to_string(fine.node_count()) +
                        " nodes");
    ScalarField2D w = wigner(spec, fine);
    if (eta < 1.0) w = loss_channel(w, eta);
    return measure(w, params);
}

}  // namespace qxi::oracle
