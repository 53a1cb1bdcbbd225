#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qxi/errors.hpp"
#include "qxi/grid.hpp"
#include "qxi/nonclassicality.hpp"
#include "qxi/states.hpp"
#include "qxi/transforms.hpp"
#include "qxi/version.hpp"

namespace qxi {

// Ordered trend records for one swept parameter, plus enough provenance to
// regenerate the run from the header alone.
struct SweepResult {
    std::string parameter;
    std::vector<std::pair<double, MeasureReport>> records;
    std::vector<std::pair<std::string, std::string>> provenance;
};

struct SweepConfig {
    StateSpec base;
    CriterionParams criterion;
    double eta = 1.0;  // loss transmissivity applied to every point
    std::string parameter;               // sigma | x0 | n | S | k | eta
    std::vector<double> values;          // strictly increasing
    std::optional<GridGeometry> geometry;  // fixed window; default: auto per point
    std::optional<double> resolution;      // auto-grid resolution override
    long node_budget = kDefaultNodeBudget;
    ConvolutionBackend backend = ConvolutionBackend::spectral;
};

namespace detail {

inline bool is_state_parameter(const std::string& p) {
    return p == "sigma" || p == "x0" || p == "n";
}

inline StateSpec with_state_value(StateSpec s, const std::string& p, double v) {
    if (p == "sigma") {
        if (s.family != Family::squeezed && s.family != Family::impure_squeezed)
            throw SpecError("sweep over sigma requires a squeezed family");
        s.sigma = v;
    } else if (p == "x0") {
        if (s.family != Family::odd_cat && s.family != Family::even_cat)
            throw SpecError("sweep over x0 requires a cat family");
        s.x0 = v;
    } else if (p == "n") {
        if (s.family != Family::fock) throw SpecError("sweep over n requires the fock family");
        const double r = std::round(v);
        if (std::abs(v - r) > 1e-9) throw SpecError("fock sweep values must be integers");
        s.n = static_cast<int>(r);
    }
    return s;
}

}  // namespace detail

inline SweepResult run_sweep(const SweepConfig& cfg) {
    if (cfg.values.empty()) throw SpecError("sweep needs at least one parameter value");
    for (std::size_t idx = 1; idx < cfg.values.size(); ++idx)
        if (!(cfg.values[idx] > cfg.values[idx - 1]))
            throw SpecError("sweep values must be strictly increasing");
    const bool state_param = detail::is_state_parameter(cfg.parameter);
    if (!state_param && cfg.parameter != "S" && cfg.parameter != "k" && cfg.parameter != "eta")
        throw SpecError("unknown sweep parameter '" + cfg.parameter + "'");

    SweepResult out;
    out.parameter = cfg.parameter;

    // A fixed state lets one Wigner field serve every point.
    std::optional<ScalarField2D> shared_w;
    if (!state_param) {
        const GridGeometry g = cfg.geometry ? *cfg.geometry
                                            : auto_geometry(cfg.base, cfg.resolution,
                                                            cfg.node_budget);
        shared_w = wigner(cfg.base, g);
        if (cfg.parameter != "eta" && cfg.eta < 1.0)
            shared_w = loss_channel(*shared_w, cfg.eta, cfg.backend);
    }

    for (double v : cfg.values) {
        MeasureReport rep;
        if (state_param) {
            const StateSpec spec = detail::with_state_value(cfg.base, cfg.parameter, v);
            const GridGeometry g = cfg.geometry ? *cfg.geometry
                                                : auto_geometry(spec, cfg.resolution,
                                                                cfg.node_budget);
            ScalarField2D w = wigner(spec, g);
            if (cfg.eta < 1.0) w = loss_channel(w, cfg.eta, cfg.backend);
            rep = measure(w, cfg.criterion, cfg.backend);
        } else if (cfg.parameter == "eta") {
            const ScalarField2D w =
                v < 1.0 ? loss_channel(*shared_w, v, cfg.backend) : *shared_w;
            rep = measure(w, cfg.criterion, cfg.backend);
        } else {
            CriterionParams p = cfg.criterion;
            if (cfg.parameter == "S")
                p = CriterionParams(v, cfg.criterion.k);
            else
                p = CriterionParams(cfg.criterion.S, v);
            rep = measure(*shared_w, p, cfg.backend);
        }
        out.records.emplace_back(v, rep);
    }

    out.provenance = {
        {"tool_version", kVersion},
        {"state", to_params_string(cfg.base)},
        {"S", std::to_string(cfg.criterion.S)},
        {"k", std::to_string(cfg.criterion.k)},
        {"eta", std::to_string(cfg.eta)},
        {"parameter", cfg.parameter},
        {"grid",
         cfg.geometry
             ? ("explicit nx=" + std::to_string(cfg.geometry->nx) +
                " np=" + std::to_string(cfg.geometry->np) +
                " xmin=" + std::to_string(cfg.geometry->xmin) +
                " xmax=" + std::to_string(cfg.geometry->xmax) +
                " pmin=" + std::to_string(cfg.geometry->pmin) +
                " pmax=" + std::to_string(cfg.geometry->pmax))
             : ("auto resolution=" +
                (cfg.resolution ? std::to_string(*cfg.resolution) : std::string("default")) +
                " budget=" + std::to_string(cfg.node_budget))},
        {"backend", cfg.backend == ConvolutionBackend::spectral ? "spectral" : "direct_sum"},
    };
    return out;
}

}  // namespace qxi
