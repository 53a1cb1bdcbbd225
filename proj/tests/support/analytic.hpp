#pragma once

// Closed forms used as independent oracles: symbolically differentiated
// Laplacians of the state families, the exact loss-channel output for cats,
// and exact comparison-measure values for Gaussian states.

#include <cmath>
#include <numbers>

#include "qxi/qxi.hpp"

namespace qxi::analytic {

inline constexpr double pi = std::numbers::pi;

// e^{-v/2} L_k^{(a)}(v), upward recurrence on the weighted values.
inline double laguerre_weighted_assoc(int k, int a, double v) {
    double m0 = std::exp(-0.5 * v);
    if (k == 0) return m0;
    double m1 = (a + 1.0 - v) * m0;
    for (int i = 1; i < k; ++i) {
        const double m2 = ((2.0 * i + a + 1.0 - v) * m1 - (i + a) * m0) / (i + 1.0);
        m0 = m1;
        m1 = m2;
    }
    return m1;
}

// Laplacian of A exp(-a(x-xc)^2 - b(p-pc)^2).
inline double laplacian_gaussian(double A, double a, double b, double xc, double pc, double x,
                                 double p) {
    const double u = x - xc, v = p - pc;
    const double w = A * std::exp(-a * u * u - b * v * v);
    return (4.0 * a * a * u * u - 2.0 * a + 4.0 * b * b * v * v - 2.0 * b) * w;
}

inline double laplacian_wigner_vacuum(double x, double p, double xc = 0.0, double pc = 0.0) {
    return laplacian_gaussian(1.0 / pi, 1.0, 1.0, xc, pc, x, p);
}

inline double laplacian_wigner_squeezed(double sigma, double x, double p) {
    return laplacian_gaussian(1.0 / pi, 1.0 / (sigma * sigma), sigma * sigma, 0.0, 0.0, x, p);
}

inline double laplacian_wigner_impure(double sigma, double iota, double x, double p) {
    return laplacian_gaussian(1.0 / (pi * std::sqrt(iota)), 1.0 / (sigma * sigma),
                              sigma * sigma / iota, 0.0, 0.0, x, p);
}

inline double laplacian_wigner_cat(double x0, bool odd, double x, double p) {
    const double ov = std::exp(-x0 * x0);
    const double norm = 2.0 * pi * (odd ? 1.0 - ov : 1.0 + ov);
    const double gp = laplacian_gaussian(1.0, 1.0, 1.0, x0, 0.0, x, p);
    const double gm = laplacian_gaussian(1.0, 1.0, 1.0, -x0, 0.0, x, p);
    const double f = std::exp(-x * x - p * p);
    const double c = std::cos(2.0 * x0 * p), s = std::sin(2.0 * x0 * p);
    const double lap_fringe = ((4.0 * x * x - 2.0) + (4.0 * p * p - 2.0 - 4.0 * x0 * x0)) * f * c +
                              8.0 * p * x0 * f * s;
    return (gp + gm + (odd ? -2.0 : 2.0) * lap_fringe) / norm;
}

// W_n = ((-1)^n/pi) f(r^2) with f(u) = e^{-u} L_n(2u); the radial chain rule
// gives Lap W = ((-1)^n/pi)(4u f'' + 4 f').
inline double laplacian_wigner_fock(int n, double x, double p) {
    const double u = x * x + p * p;
    const double v = 2.0 * u;
    const double f1 = -laguerre_weighted_assoc(n, 0, v) -
                      (n >= 1 ? 2.0 * laguerre_weighted_assoc(n - 1, 1, v) : 0.0);
    const double f2 = laguerre_weighted_assoc(n, 0, v) +
                      (n >= 1 ? 4.0 * laguerre_weighted_assoc(n - 1, 1, v) : 0.0) +
                      (n >= 2 ? 4.0 * laguerre_weighted_assoc(n - 2, 2, v) : 0.0);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign / pi * (4.0 * u * f2 + 4.0 * f1);
}

// Exact loss-channel output for a cat: lobes contract to +-sqrt(eta) x0, the
// fringe frequency drops to 2 sqrt(eta) x0 and its contrast picks up the
// coherence factor e^{-(1-eta) x0^2}.
inline ScalarField2D lossy_cat_wigner(double x0, double eta, bool odd, const GridGeometry& g) {
    const double ov = std::exp(-x0 * x0);
    const double norm = 2.0 * pi * (odd ? 1.0 - ov : 1.0 + ov);
    const double se = std::sqrt(eta);
    const double contrast = std::exp(-(1.0 - eta) * x0 * x0);
    ScalarField2D f(g, DistributionOrder::wigner());
    for (int j = 0; j < g.np; ++j) {
        const double p = g.p(j);
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.x(i);
            const double lobes = std::exp(-(x - se * x0) * (x - se * x0) - p * p) +
                                 std::exp(-(x + se * x0) * (x + se * x0) - p * p);
            const double fr = 2.0 * contrast * std::exp(-x * x - p * p) *
                              std::cos(2.0 * se * x0 * p);
            f.at(i, j) = (lobes + (odd ? -fr : fr)) / norm;
        }
    }
    return f;
}

// Exact comparison-measure value for a centered Gaussian Wigner function with
// quadrature variances vx, vp (from the Gaussian moment integrals).
inline double lee_jeong_gaussian(double vx, double vp) {
    const double w2 = 1.0 / (4.0 * pi * std::sqrt(vx * vp));            // int W^2
    const double grad2 = (0.5 / vx + 0.5 / vp) * w2;                    // int |grad W|^2
    return (pi / 4.0) * grad2 + (pi / 2.0) * w2 - 0.5;
}

inline double lee_jeong_squeezed_exact(double sigma) {
    const double d = sigma - 1.0 / sigma;
    return d * d / 8.0;
}

inline double lee_jeong_impure_exact(double sigma, double iota) {
    return lee_jeong_gaussian(sigma * sigma / 2.0, iota / (2.0 * sigma * sigma));
}

}  // namespace qxi::analytic
