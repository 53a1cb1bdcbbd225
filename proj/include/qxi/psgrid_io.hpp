#pragma once

// PSGRID v1: a line-oriented text container for sampled phase-space fields.
//
//   PSGRID 1
//   nx <int> np <int>
//   xmin <float> xmax <float>
//   pmin <float> pmax <float>
//   order <float|derived>
//   data
//   <np rows of nx space-separated values, row j = fixed p_j ascending>
//
// Floats are written with 17 significant digits, so write -> read -> write is
// byte-identical.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "qxi/errors.hpp"
#include "qxi/grid.hpp"

namespace qxi {

namespace detail {

inline std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& tok, long line) {
    const char* s = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
        throw ParseError("malformed number '" + tok + "'", line);
    if (!std::isfinite(v)) throw ParseError("non-finite value '" + tok + "'", line);
    return v;
}

inline long parse_int(const std::string& tok, long line) {
    const char* s = tok.c_str();
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (end == s || *end != '\0')
        throw ParseError("malformed integer '" + tok + "'", line);
    return v;
}

}  // namespace detail

inline void write_grid(const ScalarField2D& field, std::ostream& out) {
    const GridGeometry& g = field.geometry;
    out << "PSGRID 1\n";
    out << "nx " << g.nx << " np " << g.np << "\n";
    out << "xmin " << detail::fmt17(g.xmin) << " xmax " << detail::fmt17(g.xmax) << "\n";
    out << "pmin " << detail::fmt17(g.pmin) << " pmax " << detail::fmt17(g.pmax) << "\n";
    if (field.order.derived)
        out << "order derived\n";
    else
        out << "order " << detail::fmt17(field.order.s) << "\n";
    out << "data\n";
    for (int j = 0; j < g.np; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (i) out << ' ';
            out << detail::fmt17(field.at(i, j));
        }
        out << '\n';
    }
}

inline void write_grid(const ScalarField2D& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_grid(field, out);
    out.flush();
    if (!out) throw Error("write to '" + path + "' failed");
}

inline ScalarField2D read_grid(std::istream& in) {
    long lineno = 0;
    std::string line;
    auto next_line = [&](const char* what) -> std::string& {
        if (!std::getline(in, line))
            throw ParseError(std::string("unexpected end of file, expected ") + what,
                             lineno + 1);
        ++lineno;
        return line;
    };
    auto tokens_of = [](const std::string& s) {
        std::istringstream iss(s);
        std::vector<std::string> toks;
        std::string t;
        while (iss >> t) toks.push_back(t);
        return toks;
    };

    if (next_line("'PSGRID 1'") != "PSGRID 1")
        throw ParseError("malformed header: expected 'PSGRID 1'", lineno);

    auto dims = tokens_of(next_line("'nx <int> np <int>'"));
    if (dims.size() != 4 || dims[0] != "nx" || dims[2] != "np")
        throw ParseError("malformed header: expected 'nx <int> np <int>'", lineno);
    const long nx = detail::parse_int(dims[1], lineno);
    const long np = detail::parse_int(dims[3], lineno);

    auto xs = tokens_of(next_line("'xmin <float> xmax <float>'"));
    if (xs.size() != 4 || xs[0] != "xmin" || xs[2] != "xmax")
        throw ParseError("malformed header: expected 'xmin <float> xmax <float>'", lineno);
    const double xmin = detail::parse_double(xs[1], lineno);
    const double xmax = detail::parse_double(xs[3], lineno);

    auto ps = tokens_of(next_line("'pmin <float> pmax <float>'"));
    if (ps.size() != 4 || ps[0] != "pmin" || ps[2] != "pmax")
        throw ParseError("malformed header: expected 'pmin <float> pmax <float>'", lineno);
    const double pmin = detail::parse_double(ps[1], lineno);
    const double pmax = detail::parse_double(ps[3], lineno);

    auto ord = tokens_of(next_line("'order <float|derived>'"));
    if (ord.size() != 2 || ord[0] != "order")
        throw ParseError("malformed header: expected 'order <float|derived>'", lineno);
    DistributionOrder order;
    if (ord[1] == "derived") {
        order = DistributionOrder::derived_field();
    } else {
        const double s = detail::parse_double(ord[1], lineno);
        if (s > 0.0)
            throw ParseError("unsupported distribution order " + ord[1] +
                                 ": orders above the Wigner order cannot be represented",
                             lineno);
        order = DistributionOrder::of(s);
    }

    if (next_line("'data'") != "data")
        throw ParseError("malformed header: expected 'data'", lineno);

    GridGeometry geom(static_cast<int>(nx), static_cast<int>(np), xmin, xmax, pmin, pmax);
    ScalarField2D field(geom, order);
    for (long j = 0; j < np; ++j) {
        auto row = tokens_of(next_line("a data row"));
        if (static_cast<long>(row.size()) != nx)
            throw ParseError("expected nx*np values: row has " +
                                 std::to_string(row.size()) + " of " + std::to_string(nx) +
                                 " columns",
                             lineno);
        for (long i = 0; i < nx; ++i)
            field.at(static_cast<int>(i), static_cast<int>(j)) =
                detail::parse_double(row[static_cast<std::size_t>(i)], lineno);
    }
    while (std::getline(in, line)) {
        ++lineno;
        if (!tokens_of(line).empty())
            throw ParseError("trailing content after data section", lineno);
    }
    return field;
}

inline ScalarField2D read_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    return read_grid(in);
}

}  // namespace qxi
