#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qxi/errors.hpp"
#include "qxi/grid.hpp"

namespace qxi {

enum class Family {
    vacuum,
    coherent,
    squeezed,
    odd_cat,
    even_cat,
    fock,
    impure_squeezed,
    mixture,
};

inline const char* family_name(Family f) {
    switch (f) {
        case Family::vacuum: return "vacuum";
        case Family::coherent: return "coherent";
        case Family::squeezed: return "squeezed";
        case Family::odd_cat: return "odd_cat";
        case Family::even_cat: return "even_cat";
        case Family::fock: return "fock";
        case Family::impure_squeezed: return "impure_squeezed";
        case Family::mixture: return "mixture";
    }
    return "?";
}

// Declarative description of a state. Displacement (x_c, p_c) applies to any
// family; the remaining parameters are family-specific. Mixtures hold a
// convex combination of sub-specs.
struct StateSpec {
    Family family = Family::vacuum;
    double x_c = 0.0, p_c = 0.0;
    double sigma = 1.0;   // squeezed / impure_squeezed
    double x0 = 0.0;      // cat half-separation
    int n = 0;            // fock index
    double iota = 1.0;    // impurity factor, >= 1
    std::vector<std::pair<double, StateSpec>> components;  // mixture only

    static StateSpec vacuum() { return {}; }
    static StateSpec coherent(double xc, double pc) {
        StateSpec s;
        s.family = Family::coherent;
        s.x_c = xc;
        s.p_c = pc;
        return s;
    }
    static StateSpec squeezed(double sigma) {
        StateSpec s;
        s.family = Family::squeezed;
        s.sigma = sigma;
        return s;
    }
    static StateSpec odd_cat(double x0) {
        StateSpec s;
        s.family = Family::odd_cat;
        s.x0 = x0;
        return s;
    }
    static StateSpec even_cat(double x0) {
        StateSpec s;
        s.family = Family::even_cat;
        s.x0 = x0;
        return s;
    }
    static StateSpec fock(int n) {
        StateSpec s;
        s.family = Family::fock;
        s.n = n;
        return s;
    }
    static StateSpec impure_squeezed(double sigma, double iota) {
        StateSpec s;
        s.family = Family::impure_squeezed;
        s.sigma = sigma;
        s.iota = iota;
        return s;
    }
    static StateSpec mixture(std::vector<std::pair<double, StateSpec>> comps) {
        StateSpec s;
        s.family = Family::mixture;
        s.components = std::move(comps);
        return s;
    }

    StateSpec displaced(double a, double b) const {
        StateSpec s = *this;
        s.x_c += a;
        s.p_c += b;
        return s;
    }

    void validate() const {
        if (!std::isfinite(x_c) || !std::isfinite(p_c))
            throw SpecError("displacement must be finite");
        switch (family) {
            case Family::vacuum:
            case Family::coherent:
                break;
            case Family::squeezed:
                if (!(sigma > 0.0)) throw SpecError("squeezed: sigma must be > 0");
                break;
            case Family::odd_cat:
                if (!(x0 > 0.0)) throw SpecError("odd_cat: x0 must be > 0");
                break;
            case Family::even_cat:
                if (!(x0 >= 0.0)) throw SpecError("even_cat: x0 must be >= 0");
                break;
            case Family::fock:
                if (n < 0) throw SpecError("fock: n must be a non-negative integer");
                break;
            case Family::impure_squeezed:
                if (!(sigma > 0.0)) throw SpecError("impure_squeezed: sigma must be > 0");
                if (!(iota >= 1.0)) throw SpecError("impure_squeezed: iota must be >= 1");
                break;
            case Family::mixture: {
                if (components.empty()) throw SpecError("mixture: needs at least one component");
                double wsum = 0.0;
                for (const auto& [w, sub] : components) {
                    if (!(w >= 0.0)) throw SpecError("mixture: weights must be >= 0");
                    if (sub.family == Family::mixture)
                        throw SpecError("mixture: nested mixtures are not supported");
                    sub.validate();
                    wsum += w;
                }
                if (std::abs(wsum - 1.0) > 1e-12)
                    throw SpecError("mixture: weights must sum to 1");
                break;
            }
        }
    }
};

// e^{-u/2} L_n(u) by the three-term upward recurrence applied directly to the
// weighted values. |e^{-u/2} L_n(u)| <= 1 for u >= 0, so nothing overflows
// even for large n; this is what keeps Wigner samples inside the 1/pi bound.
inline double laguerre_weighted(int n, double u) {
    double m0 = std::exp(-0.5 * u);
    if (n == 0) return m0;
    double m1 = (1.0 - u) * m0;
    for (int k = 1; k < n; ++k) {
        const double m2 = ((2.0 * k + 1.0 - u) * m1 - k * m0) / (k + 1.0);
        m0 = m1;
        m1 = m2;
    }
    return m1;
}

namespace detail {

inline double wigner_point(const StateSpec& s, double xq, double pq) {
    constexpr double pi = std::numbers::pi;
    const double x = xq - s.x_c;
    const double p = pq - s.p_c;
    switch (s.family) {
        case Family::vacuum:
        case Family::coherent:
            return std::exp(-x * x - p * p) / pi;
        case Family::squeezed:
            return std::exp(-x * x / (s.sigma * s.sigma) - s.sigma * s.sigma * p * p) / pi;
        case Family::impure_squeezed:
            return std::exp(-x * x / (s.sigma * s.sigma)) *
                   std::exp(-s.sigma * s.sigma * p * p / s.iota) /
                   (pi * std::sqrt(s.iota));
        case Family::odd_cat:
        case Family::even_cat: {
            const bool odd = s.family == Family::odd_cat;
            const double ov = std::exp(-s.x0 * s.x0);
            const double norm = 2.0 * pi * (odd ? 1.0 - ov : 1.0 + ov);
            const double lobes = std::exp(-(x - s.x0) * (x - s.x0) - p * p) +
                                 std::exp(-(x + s.x0) * (x + s.x0) - p * p);
            const double fringe =
                2.0 * std::exp(-x * x - p * p) * std::cos(2.0 * s.x0 * p);
            return (lobes + (odd ? -fringe : fringe)) / norm;
        }
        case Family::fock:
            return ((s.n % 2 == 0) ? 1.0 : -1.0) / pi *
                   laguerre_weighted(s.n, 2.0 * (x * x + p * p));
        case Family::mixture: {
            double acc = 0.0;
            for (const auto& [w, sub] : s.components)
                acc += w * wigner_point(sub.displaced(s.x_c, s.p_c), xq, pq);
            return acc;
        }
    }
    return 0.0;
}

inline double husimi_point(const StateSpec& s, double xq, double pq) {
    constexpr double pi = std::numbers::pi;
    const double x = xq - s.x_c;
    const double p = pq - s.p_c;
    switch (s.family) {
        case Family::vacuum:
        case Family::coherent:
            return std::exp(-(x * x + p * p) / 2.0) / (2.0 * pi);
        case Family::squeezed: {
            const double vx = (s.sigma * s.sigma + 1.0) / 2.0;
            const double vp = (1.0 + 1.0 / (s.sigma * s.sigma)) / 2.0;
            return std::exp(-x * x / (2.0 * vx) - p * p / (2.0 * vp)) /
                   (2.0 * pi * std::sqrt(vx * vp));
        }
        case Family::fock: {
            const double h = (x * x + p * p) / 2.0;
            if (s.n == 0) return std::exp(-h) / (2.0 * pi);
            if (h == 0.0) return 0.0;
            return std::exp(-h + s.n * std::log(h) - std::lgamma(s.n + 1.0)) / (2.0 * pi);
        }
        default:
            throw SpecError(std::string("no closed form for the order -1 distribution of "
                                        "family '") +
                            family_name(s.family) + "'; smooth the Wigner field instead");
    }
}

// Largest |W| over the four axis points at distance r from the origin. Used
// by the window search; conservative for mixtures (max over components).
inline double axis_envelope(const StateSpec& s, double r) {
    if (s.family == Family::mixture) {
        double m = 0.0;
        for (const auto& [w, sub] : s.components)
            m = std::max(m, axis_envelope(sub.displaced(s.x_c, s.p_c), r));
        return m;
    }
    double m = 0.0;
    m = std::max(m, std::abs(wigner_point(s, r, 0.0)));
    m = std::max(m, std::abs(wigner_point(s, -r, 0.0)));
    m = std::max(m, std::abs(wigner_point(s, 0.0, r)));
    m = std::max(m, std::abs(wigner_point(s, 0.0, -r)));
    return m;
}

inline double resolution_bound(const StateSpec& s) {
    constexpr double pi = std::numbers::pi;
    switch (s.family) {
        case Family::odd_cat:
        case Family::even_cat:
            return s.x0 > 0.0 ? pi / (12.0 * s.x0) : 1e30;
        case Family::fock:
            return 0.2 / std::sqrt(2.0 * s.n + 1.0);
        case Family::squeezed:
        case Family::impure_squeezed:
            return 0.05 * std::min(s.sigma, 1.0 / s.sigma);
        case Family::mixture: {
            double b = 1e30;
            for (const auto& [w, sub] : s.components)
                b = std::min(b, resolution_bound(sub));
            return b;
        }
        default:
            return 1e30;
    }
}

}  // namespace detail

// Window half-width for a state: smallest axis distance past which the
// envelope stays below 1e-12, plus half a unit of margin, rounded up to a
// multiple of 0.5 so grids of swept families nest predictably.
inline double envelope_half_width(const StateSpec& spec) {
    spec.validate();
    constexpr double kThreshold = 1e-12;
    // A single sub-threshold sample is not enough: oscillatory families dip
    // through zero well inside their support.
    const double step = 0.01;
    const int need = 30;
    double r = 0.25;
    int run = 0;
    while (run < need) {
        if (detail::axis_envelope(spec, r) < kThreshold)
            ++run;
        else
            run = 0;
        r += step;
        if (r > 1e4) throw GridError("envelope search did not converge");
    }
    return ceil_to_half(r - need * step + 0.5);
}

// Square auto window with the family's sampling bound: 0.05 by default,
// tightened where fine structure demands it (fringes, rings, squeezing).
inline GridGeometry auto_geometry(const StateSpec& spec,
                                  std::optional<double> requested_resolution = {},
                                  long node_budget = kDefaultNodeBudget) {
    spec.validate();
    if (requested_resolution && !(*requested_resolution > 0.0))
        throw SpecError("requested resolution must be > 0");
    const double L = envelope_half_width(spec);
    const double d =
        std::min(requested_resolution.value_or(0.05), detail::resolution_bound(spec));
    const long half = static_cast<long>(std::ceil(L / d - 1e-12));
    const long nodes = (2 * half + 1) * (2 * half + 1);
    if (nodes > node_budget)
        throw GridError("grid too large: " + std::to_string(nodes) + " nodes exceed budget " +
                        std::to_string(node_budget) +
                        " (set QXI_NODE_BUDGET or pass an explicit window)");
    return GridGeometry::centered(L, L, d, d);
}

// Wigner (order 0) field from the closed forms.
inline ScalarField2D wigner(const StateSpec& spec, const GridGeometry& geom) {
    spec.validate();
    ScalarField2D f(geom, DistributionOrder::wigner());
    for (int j = 0; j < geom.np; ++j) {
        const double p = geom.p(j);
        for (int i = 0; i < geom.nx; ++i)
            f.at(i, j) = detail::wigner_point(spec, geom.x(i), p);
    }
    // Window adequacy: the state must have decayed at the window edge.
    double edge = 0.0;
    for (int i = 0; i < geom.nx; ++i)
        edge = std::max({edge, std::abs(f.at(i, 0)), std::abs(f.at(i, geom.np - 1))});
    for (int j = 0; j < geom.np; ++j)
        edge = std::max({edge, std::abs(f.at(0, j)), std::abs(f.at(geom.nx - 1, j))});
    if (edge > 1e-9)
        throw GridError("window too small: state envelope at the window edge is " +
                        std::to_string(edge));
    return f;
}

// Closed-form order -1 field; only vacuum/coherent, squeezed and fock have
// one. Everything else goes through the smoothing transform.
inline ScalarField2D husimi_analytic(const StateSpec& spec, const GridGeometry& geom) {
    spec.validate();
    ScalarField2D f(geom, DistributionOrder::husimi());
    for (int j = 0; j < geom.np; ++j) {
        const double p = geom.p(j);
        for (int i = 0; i < geom.nx; ++i)
            f.at(i, j) = detail::husimi_point(spec, geom.x(i), p);
    }
    return f;
}

// Flat key=value form used by the command line and by provenance blocks.
inline std::string to_params_string(const StateSpec& s) {
    std::ostringstream o;
    auto kv = [&o](const char* k, double v) { o << "," << k << "=" << v; };
    o << "family=" << family_name(s.family);
    switch (s.family) {
        case Family::vacuum: break;
        case Family::coherent: break;
        case Family::squeezed: kv("sigma", s.sigma); break;
        case Family::odd_cat:
        case Family::even_cat: kv("x0", s.x0); break;
        case Family::fock: o << ",n=" << s.n; break;
        case Family::impure_squeezed:
            kv("sigma", s.sigma);
            kv("iota", s.iota);
            break;
        case Family::mixture:
            kv("w", s.components.empty() ? 0.0 : s.components[0].first);
            if (s.components.size() == 2) {
                kv("x1", s.components[0].second.x_c);
                kv("p1", s.components[0].second.p_c);
                kv("x2", s.components[1].second.x_c);
                kv("p2", s.components[1].second.p_c);
            }
            break;
    }
    if (s.x_c != 0.0) kv("xc", s.x_c);
    if (s.p_c != 0.0) kv("pc", s.p_c);
    return o.str();
}

}  // namespace qxi
