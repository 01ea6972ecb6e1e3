#pragma once

// Closed-form decoding-proximity bounds for nearest-plane detection on
// block-reduced bases, plus an audit of the underlying per-index
// inequalities against exact successive minima.

#include <algorithm>
#include <string>
#include <vector>

#include "latred/basis.hpp"
#include "latred/enumerate.hpp"
#include "latred/gso.hpp"
#include "latred/hermite.hpp"

namespace latred {

struct ProximityBound {
    int m = 0;
    int beta = 0;
    HermiteValue gamma;
    double value = 0.0;     // gamma^(4(m-1)/(beta-1)) * (m+3)/4
    Vec per_index;          // entry i-1: gamma^(2(m+i-2)/(beta-1)) * (i+3)/4
};

namespace detail {

inline void validate_block(int m, int beta) {
    if (m < 1) throw Error("rank must be >= 1, got " + std::to_string(m));
    if (beta < 2 || (m >= 2 && beta > m))
        throw Error("block size must lie in [2, rank], got beta=" + std::to_string(beta) +
                    " for rank " + std::to_string(m));
}

}  // namespace detail

// Worst-case ratio of the squared shortest vector to the squared projected
// basis norms, for rank m and block size beta. The m = 1 case is degenerate
// and returns 1.
inline ProximityBound proximity_bound_sic(int m, int beta) {
    detail::validate_block(m, beta);
    ProximityBound b;
    b.m = m;
    b.beta = beta;
    b.gamma = hermite_constant(beta);
    b.per_index.reserve(m);
    for (int i = 1; i <= m; ++i)
        b.per_index.push_back(hermite_power(b.gamma, 2LL * (m + i - 2), beta - 1) *
                              (static_cast<double>(i) + 3.0) / 4.0);
    b.value = hermite_power(b.gamma, 4LL * (m - 1), beta - 1) *
              (static_cast<double>(m) + 3.0) / 4.0;
    return b;
}

// |b_i|^2 / lambda_i^2 <= gamma^(2(m-1)/(beta-1)) * (i+3)/4 on block-reduced
// bases (i is 1-based).
inline double schnorr_upper(int i, int m, int beta) {
    detail::validate_block(m, beta);
    if (i < 1 || i > m)
        throw Error("index must lie in [1, rank], got " + std::to_string(i));
    const HermiteValue g = hermite_constant(beta);
    return hermite_power(g, 2LL * (m - 1), beta - 1) * (static_cast<double>(i) + 3.0) / 4.0;
}

// |b_i^perp|^2 / lambda_i^2 >= gamma^(-2(i-1)/(beta-1)) on block-reduced
// bases (i is 1-based).
inline double schnorr_lower(int i, int m, int beta) {
    detail::validate_block(m, beta);
    if (i < 1 || i > m)
        throw Error("index must lie in [1, rank], got " + std::to_string(i));
    const HermiteValue g = hermite_constant(beta);
    return hermite_power(g, -2LL * (i - 1), beta - 1);
}

struct SchnorrCheck {
    int index = 0;          // 1-based
    double upper_ratio = 0; // |b_i|^2 / lambda_i^2
    double upper_bound = 0;
    double lower_ratio = 0; // |b_i^perp|^2 / lambda_i^2
    double lower_bound = 0;
    bool ok = false;
    double margin = 0;      // min relative slack of the two inequalities
};

struct SchnorrReport {
    int m = 0;
    int beta = 0;
    std::vector<SchnorrCheck> checks;
    bool all_ok = true;
    double worst_margin = 0;
    int worst_index = 0;
};

// Evaluate both inequalities on a (presumably block-reduced) basis with
// exact successive minima. Violations are reported, never thrown.
inline SchnorrReport check_schnorr(const Basis& basis, int beta, int rank_cap = 12) {
    const int m = basis.rank();
    detail::validate_block(m, beta);
    const GsoDecomposition g = compute_gso(basis);
    const std::vector<SvpResult> minima = successive_minima(basis, m, rank_cap);

    SchnorrReport rep;
    rep.m = m;
    rep.beta = beta;
    for (int i = 1; i <= m; ++i) {
        SchnorrCheck c;
        c.index = i;
        const double li = minima[static_cast<size_t>(i - 1)].norm_sq;
        c.upper_ratio = norm_sq(basis.gens[static_cast<size_t>(i - 1)]) / li;
        c.upper_bound = schnorr_upper(i, m, beta);
        c.lower_ratio = g.norms_sq[static_cast<size_t>(i - 1)] / li;
        c.lower_bound = schnorr_lower(i, m, beta);
        const double upper_margin = (c.upper_bound - c.upper_ratio) / c.upper_bound;
        const double lower_margin = (c.lower_ratio - c.lower_bound) / c.lower_bound;
        c.margin = std::min(upper_margin, lower_margin);
        c.ok = c.margin >= -tol::identity;
        if (rep.checks.empty() || c.margin < rep.worst_margin) {
            rep.worst_margin = c.margin;
            rep.worst_index = i;
        }
        rep.all_ok = rep.all_ok && c.ok;
        rep.checks.push_back(c);
    }
    return rep;
}

}  // namespace latred
