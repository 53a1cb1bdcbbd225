// Command-line front end: generate phase-space grids, evaluate the
// nonclassicality criterion and quantumness measure, and run trend sweeps.
//
// Exit codes: 0 success, 2 usage error, 3 numeric/validation error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qxi/qxi.hpp"

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::map<std::string, double> parse_params(const std::string& text) {
    std::map<std::string, double> kv;
    if (text.empty()) return kv;
    std::string item;
    std::istringstream iss(text);
    while (std::getline(iss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--params", "expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        char* end = nullptr;
        const double val = std::strtod(item.c_str() + eq + 1, &end);
        if (end == item.c_str() + eq + 1 || *end != '\0')
            throw CLI::ValidationError("--params", "bad value in '" + item + "'");
        kv[key] = val;
    }
    return kv;
}

qxi::StateSpec build_spec(const std::string& family, const std::string& params_text) {
    auto kv = parse_params(params_text);
    auto take = [&kv](const char* key, double fallback) {
        const auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        const double v = it->second;
        kv.erase(it);
        return v;
    };
    qxi::StateSpec s;
    if (family == "vacuum") {
        s = qxi::StateSpec::vacuum();
    } else if (family == "coherent") {
        s = qxi::StateSpec::coherent(take("xc", 0.0), take("pc", 0.0));
    } else if (family == "squeezed") {
        s = qxi::StateSpec::squeezed(take("sigma", 1.0));
    } else if (family == "cat" || family == "odd_cat") {
        s = qxi::StateSpec::odd_cat(take("x0", 1.0));
    } else if (family == "even_cat") {
        s = qxi::StateSpec::even_cat(take("x0", 1.0));
    } else if (family == "fock") {
        s = qxi::StateSpec::fock(static_cast<int>(take("n", 0.0)));
    } else if (family == "impure_squeezed") {
        s = qxi::StateSpec::impure_squeezed(take("sigma", 1.0), take("iota", 1.0));
    } else if (family == "mixture") {
        // two displaced coherent components: w, x1, p1, x2, p2
        const double w = take("w", 0.5);
        const double x1 = take("x1", 0.0), p1 = take("p1", 0.0);
        const double x2 = take("x2", 0.0), p2 = take("p2", 0.0);
        s = qxi::StateSpec::mixture({{w, qxi::StateSpec::coherent(x1, p1)},
                                     {1.0 - w, qxi::StateSpec::coherent(x2, p2)}});
    } else {
        throw CLI::ValidationError("--family", "unknown family '" + family + "'");
    }
    const double xc = take("xc", 0.0), pc = take("pc", 0.0);
    if (xc != 0.0 || pc != 0.0) s = s.displaced(xc, pc);
    if (!kv.empty())
        throw CLI::ValidationError("--params", "unknown key '" + kv.begin()->first +
                                                   "' for family " + family);
    s.validate();
    return s;
}

long node_budget_from_env() {
    if (const char* env = std::getenv("QXI_NODE_BUDGET")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
        throw qxi::SpecError("QXI_NODE_BUDGET must be a positive integer");
    }
    return qxi::kDefaultNodeBudget;
}

struct GridFlags {
    double win = 0.0, winx = 0.0, winp = 0.0;
    double dx = 0.0, dp = 0.0;
    double resolution = 0.0;

    bool explicit_window() const { return win > 0.0 || winx > 0.0 || winp > 0.0; }

    void add_to(CLI::App* cmd) {
        cmd->add_option("--win", win, "explicit square window half-width");
        cmd->add_option("--winx", winx, "explicit window half-width in x");
        cmd->add_option("--winp", winp, "explicit window half-width in p");
        cmd->add_option("--dx", dx, "explicit spacing in x");
        cmd->add_option("--dp", dp, "explicit spacing in p");
        cmd->add_option("--resolution", resolution,
                        "auto-grid target spacing (still capped by the family bound)");
    }

    qxi::GridGeometry resolve(const qxi::StateSpec& spec, long budget) const {
        if (!explicit_window()) {
            std::optional<double> res;
            if (resolution > 0.0) res = resolution;
            return qxi::auto_geometry(spec, res, budget);
        }
        const double lx = winx > 0.0 ? winx : win;
        const double lp = winp > 0.0 ? winp : win;
        if (!(lx > 0.0) || !(lp > 0.0))
            throw qxi::SpecError("explicit grids need --win or both --winx and --winp");
        const double ddx = dx > 0.0 ? dx : 0.05;
        const double ddp = dp > 0.0 ? dp : 0.05;
        const qxi::GridGeometry g = qxi::GridGeometry::centered(lx, lp, ddx, ddp);
        if (g.node_count() > budget)
            throw qxi::GridError("grid too large: " + std::to_string(g.node_count()) +
                                 " nodes exceed budget " + std::to_string(budget));
        return g;
    }
};

qxi::ScalarField2D load_or_generate(const std::string& in_path, const std::string& family,
                                    const std::string& params, const GridFlags& grid,
                                    double eta, long budget) {
    if (!in_path.empty()) {
        qxi::ScalarField2D f = qxi::read_grid(in_path);
        qxi::check_finite(f);
        if (eta < 1.0) f = qxi::loss_channel(f, eta);
        return f;
    }
    const qxi::StateSpec spec = build_spec(family, params);
    qxi::ScalarField2D w = qxi::wigner(spec, grid.resolve(spec, budget));
    if (eta < 1.0) w = qxi::loss_channel(w, eta);
    return w;
}

void print_geometry_summary(const qxi::GridGeometry& g, std::ostream& out) {
    out << "nx=" << g.nx << " np=" << g.np << " x=[" << fmt17(g.xmin) << "," << fmt17(g.xmax)
        << "] p=[" << fmt17(g.pmin) << "," << fmt17(g.pmax) << "] dx=" << fmt17(g.dx())
        << " dp=" << fmt17(g.dp()) << "\n";
}

void write_sweep_csv(const qxi::SweepResult& r, std::ostream& out) {
    out << "# qxi " << qxi::kVersion << "\n";
    for (const auto& [key, val] : r.provenance) out << "# " << key << "=" << val << "\n";
    out << "param,xi_min,xi_min_x,xi_min_p,big_xi,lee_jeong\n";
    for (const auto& [v, rep] : r.records)
        out << fmt17(v) << ',' << fmt17(rep.xi_min) << ',' << fmt17(rep.xi_min_x) << ','
            << fmt17(rep.xi_min_p) << ',' << fmt17(rep.big_xi) << ',' << fmt17(rep.lee_jeong)
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"phase-space nonclassicality criterion and quantumness measure"};
    app.require_subcommand(1);

    std::string family, params, in_path, out_path;
    double order_S = 0.0, crit_S = 0.0, crit_k = 0.5, eta = 1.0;
    bool have_order = false, refine_min = false;
    std::string backend_name = "spectral";
    GridFlags grid;

    auto add_backend = [&backend_name](CLI::App* cmd) {
        cmd->add_option("--backend", backend_name, "convolution backend")
            ->check(CLI::IsMember({"spectral", "direct"}));
    };
    auto backend = [&backend_name] {
        return backend_name == "direct" ? qxi::ConvolutionBackend::direct_sum
                                        : qxi::ConvolutionBackend::spectral;
    };

    // state: generate a quasi-distribution grid file
    CLI::App* state = app.add_subcommand("state", "generate a state grid (PSGRID v1)");
    state->add_option("--family", family, "state family")->required();
    state->add_option("--params", params, "family parameters, key=value[,key=value...]");
    state->add_option("--order", order_S, "smooth the result to this order (S <= 0)")
        ->check(CLI::Range(-100.0, 0.0));
    state->add_option("--eta", eta, "apply the loss channel with this transmissivity");
    state->add_option("--out", out_path, "output file")->required();
    grid.add_to(state);
    add_backend(state);
    state->parse_complete_callback([&] { have_order = state->count("--order") > 0; });

    // xi: write the criterion field for a state or input grid
    CLI::App* xi = app.add_subcommand("xi", "compute the criterion field");
    xi->add_option("--in", in_path, "input Wigner grid (PSGRID v1)");
    xi->add_option("--family", family, "state family (alternative to --in)");
    xi->add_option("--params", params, "family parameters");
    xi->add_option("--S", crit_S, "criterion reference order");
    xi->add_option("--k", crit_k, "criterion weight");
    xi->add_option("--eta", eta, "apply the loss channel first");
    xi->add_option("--out", out_path, "output file")->required();
    grid.add_to(xi);
    add_backend(xi);

    // measure: report xi_min, the measure, and the comparison measure
    CLI::App* meas = app.add_subcommand("measure", "evaluate the quantumness measure");
    meas->add_option("--in", in_path, "input Wigner grid (PSGRID v1)");
    meas->add_option("--family", family, "state family (alternative to --in)");
    meas->add_option("--params", params, "family parameters");
    meas->add_option("--S", crit_S, "criterion reference order");
    meas->add_option("--k", crit_k, "criterion weight");
    meas->add_option("--eta", eta, "apply the loss channel first");
    meas->add_flag("--refine-min", refine_min, "sub-grid quadratic refinement of xi_min");
    meas->add_option("--out", out_path, "also write the report JSON to this file");
    grid.add_to(meas);
    add_backend(meas);

    // sweep: trend lines over one parameter
    CLI::App* sweep = app.add_subcommand("sweep", "sweep one parameter, emit CSV");
    std::string sweep_param, values_text;
    double from = 0.0, to = 0.0;
    long steps = 0;
    sweep->add_option("--family", family, "state family")->required();
    sweep->add_option("--params", params, "family parameters");
    sweep->add_option("--param", sweep_param, "parameter to sweep: sigma|x0|n|S|k|eta")
        ->required()
        ->check(CLI::IsMember({"sigma", "x0", "n", "S", "k", "eta"}));
    sweep->add_option("--from", from, "first parameter value");
    sweep->add_option("--to", to, "last parameter value");
    sweep->add_option("--steps", steps, "number of equal steps between from and to");
    sweep->add_option("--values", values_text, "explicit comma-separated value list");
    sweep->add_option("--S", crit_S, "criterion reference order");
    sweep->add_option("--k", crit_k, "criterion weight");
    sweep->add_option("--eta", eta, "loss transmissivity applied to every point");
    sweep->add_option("--out", out_path, "output CSV file (default: stdout)");
    grid.add_to(sweep);
    add_backend(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const long budget = node_budget_from_env();

        if (state->parsed()) {
            const qxi::StateSpec spec = build_spec(family, params);
            qxi::ScalarField2D f = qxi::wigner(spec, grid.resolve(spec, budget));
            if (eta < 1.0) f = qxi::loss_channel(f, eta, backend());
            if (have_order && order_S != 0.0) f = qxi::smooth(f, order_S, backend());
            qxi::write_grid(f, out_path);
            print_geometry_summary(f.geometry, std::cout);
        } else if (xi->parsed()) {
            if (in_path.empty() == family.empty())
                throw qxi::SpecError("give exactly one of --in or --family");
            const qxi::ScalarField2D w =
                load_or_generate(in_path, family, params, grid, eta, budget);
            if (!w.order.is_wigner())
                throw qxi::TransformError("criterion field requires a Wigner-order grid");
            const qxi::CriterionParams cp(crit_S, crit_k);
            const qxi::ScalarField2D xif = cp.is_default()
                                               ? qxi::xi_field(w, backend())
                                               : qxi::xi_sk_field(w, cp, backend());
            qxi::write_grid(xif, out_path);
            const qxi::MinLocation m = qxi::xi_minimum(xif);
            std::cout << "xi_min=" << fmt17(m.value) << " at (" << fmt17(m.x) << ","
                      << fmt17(m.p) << ")\n";
        } else if (meas->parsed()) {
            if (in_path.empty() == family.empty())
                throw qxi::SpecError("give exactly one of --in or --family");
            const qxi::ScalarField2D w =
                load_or_generate(in_path, family, params, grid, eta, budget);
            if (!w.order.is_wigner())
                throw qxi::TransformError("measure requires a Wigner-order grid");
            const qxi::MeasureReport rep =
                qxi::measure(w, qxi::CriterionParams(crit_S, crit_k), backend(), refine_min);
            const std::string text = rep.to_json().dump(2);
            std::cout << text << "\n";
            if (!out_path.empty()) {
                std::ofstream out(out_path);
                if (!out) throw qxi::Error("cannot open '" + out_path + "'");
                out << text << "\n";
            }
        } else if (sweep->parsed()) {
            qxi::SweepConfig cfg;
            cfg.base = build_spec(family, params);
            cfg.criterion = qxi::CriterionParams(crit_S, crit_k);
            cfg.eta = eta;
            cfg.parameter = sweep_param;
            cfg.node_budget = budget;
            cfg.backend = backend();
            if (grid.explicit_window()) cfg.geometry = grid.resolve(cfg.base, budget);
            if (grid.resolution > 0.0) cfg.resolution = grid.resolution;
            if (!values_text.empty()) {
                std::istringstream iss(values_text);
                std::string tok;
                while (std::getline(iss, tok, ',')) cfg.values.push_back(std::stod(tok));
            } else {
                if (sweep->count("--from") == 0 || sweep->count("--to") == 0)
                    throw qxi::SpecError("sweep needs --values or --from/--to");
                if (sweep_param == "n" && steps == 0)
                    steps = static_cast<long>(std::llround(to - from));
                if (steps <= 0) throw qxi::SpecError("--steps must be positive");
                if (!(to > from)) throw qxi::SpecError("--to must exceed --from");
                for (long idx = 0; idx <= steps; ++idx)
                    cfg.values.push_back(from + idx * (to - from) / steps);
            }
            const qxi::SweepResult r = qxi::run_sweep(cfg);
            if (out_path.empty()) {
                write_sweep_csv(r, std::cout);
            } else {
                std::ofstream out(out_path);
                if (!out) throw qxi::Error("cannot open '" + out_path + "'");
                write_sweep_csv(r, out);
            }
        }
    } catch (const qxi::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
