#pragma once

// Lattice bases: a list of real column generators together with the exact
// integer unimodular transform accumulated since construction, so that
// decisions made on a reduced basis can be mapped back to the original
// coordinates.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "latred/errors.hpp"
#include "latred/linalg.hpp"

namespace latred {

namespace tol {
// Relative tolerance for algebraic identities (Pythagoras, transform replay).
inline constexpr double identity = 1e-9;
// Relative tolerance for orthogonality and determinant-preservation checks.
inline constexpr double orthogonality = 1e-8;
// A generator whose Gram-Schmidt residual falls below this (relative to its
// own norm, squared) is treated as linearly dependent.
inline constexpr double rank_ratio_sq = 1e-20;
}  // namespace tol

struct Basis {
    std::vector<Vec> gens;  // m generators, each of ambient dimension d >= m
    IntMat transform;       // m x m, |det| = 1, gens = original * transform

    int rank() const { return static_cast<int>(gens.size()); }
    int dim() const { return gens.empty() ? 0 : static_cast<int>(gens[0].size()); }
};

inline Basis make_basis(std::vector<Vec> gens) {
    if (gens.empty()) throw Error("make_basis: no generators");
    const std::size_t d = gens[0].size();
    if (d == 0) throw Error("make_basis: zero ambient dimension");
    for (const auto& g : gens)
        if (g.size() != d) throw Error("make_basis: ragged generator lengths");
    if (gens.size() > d) throw Error("make_basis: more generators than ambient dimension");
    Basis b;
    b.transform = IntMat::identity(static_cast<int>(gens.size()));
    b.gens = std::move(gens);
    return b;
}

inline Vec lattice_point(const Basis& b, const IntVec& coeffs) {
    Vec p(b.dim(), 0.0);
    for (int j = 0; j < b.rank(); ++j) {
        const double c = static_cast<double>(coeffs[j]);
        if (c == 0.0) continue;
        for (int i = 0; i < b.dim(); ++i) p[i] += c * b.gens[j][i];
    }
    return p;
}

// Largest relative residual of gens = original * transform, over all entries.
inline double transform_residual(const Basis& original, const Basis& current) {
    double worst = 0.0;
    double scale = 0.0;
    for (const auto& g : original.gens)
        for (double v : g) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) scale = 1.0;
    for (int j = 0; j < current.rank(); ++j) {
        Vec expect(current.dim(), 0.0);
        for (int k = 0; k < original.rank(); ++k) {
            const double c = static_cast<double>(current.transform.at(k, j));
            if (c == 0.0) continue;
            for (int i = 0; i < current.dim(); ++i) expect[i] += c * original.gens[k][i];
        }
        for (int i = 0; i < current.dim(); ++i)
            worst = std::max(worst, std::abs(expect[i] - current.gens[j][i]) / scale);
    }
    return worst;
}

// --- Text format ------------------------------------------------------------
//
// First non-comment line: "m d". Then m lines of d decimal numbers, one
// generator per line. Lines beginning with '#' are comments (counterexample
// files carry their parameters that way). The writer emits 17 significant
// digits, which round-trips doubles exactly.

inline Basis read_basis(std::istream& in) {
    std::string line;
    int lineno = 0;
    auto next_content_line = [&](std::string& out) -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            std::size_t p = line.find_first_not_of(" \t\r");
            if (p == std::string::npos) continue;
            if (line[p] == '#') continue;
            out = line;
            return true;
        }
        return false;
    };
    std::string header;
    if (!next_content_line(header)) throw ParseError(lineno, "basis file: missing header line");
    long m = 0, d = 0;
    {
        std::istringstream hs(header);
        std::string extra;
        if (!(hs >> m >> d) || (hs >> extra))
            throw ParseError(lineno, "basis file: line " + std::to_string(lineno) +
                                         ": header must be exactly \"m d\"");
        if (m < 1 || d < m)
            throw ParseError(lineno, "basis file: line " + std::to_string(lineno) +
                                         ": need 1 <= m <= d, got m=" + std::to_string(m) +
                                         " d=" + std::to_string(d));
    }
    std::vector<Vec> gens;
    gens.reserve(static_cast<std::size_t>(m));
    for (long r = 0; r < m; ++r) {
        std::string row;
        if (!next_content_line(row))
            throw ParseError(lineno, "basis file: expected " + std::to_string(m) +
                                         " generator lines, found " + std::to_string(r));
        std::istringstream rs(row);
        Vec g;
        double v;
        while (rs >> v) g.push_back(v);
        if (!rs.eof()) {
            std::string bad;
            rs.clear();
            rs >> bad;
            throw ParseError(lineno, "basis file: line " + std::to_string(lineno) +
                                         ": unparsable token \"" + bad + "\"");
        }
        if (static_cast<long>(g.size()) != d)
            throw ParseError(lineno, "basis file: line " + std::to_string(lineno) + ": expected " +
                                         std::to_string(d) + " numbers, found " +
                                         std::to_string(g.size()));
        gens.push_back(std::move(g));
    }
    return make_basis(std::move(gens));
}

inline void write_basis(std::ostream& out, const Basis& b, const std::string& comment = "") {
    if (!comment.empty()) out << "# " << comment << "\n";
    out << b.rank() << " " << b.dim() << "\n";
    char buf[64];
    for (const auto& g : b.gens) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", g[i]);
            out << (i ? " " : "") << buf;
        }
        out << "\n";
    }
}

inline Basis load_basis(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open basis file: " + path);
    return read_basis(in);
}

inline void save_basis(const std::string& path, const Basis& b, const std::string& comment = "") {
    std::ofstream out(path);
    if (!out) throw Error("cannot write basis file: " + path);
    write_basis(out, b, comment);
}

}  // namespace latred
