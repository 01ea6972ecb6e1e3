#pragma once

// Lenstra-Lenstra-Lovasz reduction with exact unimodular bookkeeping.

#include <algorithm>
#include <string>

#include "latred/basis.hpp"
#include "latred/gso.hpp"

namespace latred {

struct ReductionParams {
    double delta = 0.99;    // Lovasz parameter, (1/4, 1]
    int beta = 2;           // block size for the block reducers
    int max_tours = 32;     // cap on block-reduction sweeps
    int enum_rank_cap = 12; // desk-scale guard for exact enumeration
};

struct ReductionStats {
    int tours = 0;
    int insertions = 0;
    long long swaps = 0;
};

namespace detail {

inline void validate_delta(double delta) {
    if (!(delta > 0.25 && delta <= 1.0))
        throw Error("delta must lie in (1/4, 1], got " + std::to_string(delta));
}

}  // namespace detail

// Size reduction plus the Lovasz condition
// |b_k^perp + mu_{k,k-1} b_{k-1}^perp|^2 >= delta |b_{k-1}^perp|^2.
inline Basis lll_reduce(const Basis& input, const ReductionParams& params = {},
                        ReductionStats* stats = nullptr) {
    detail::validate_delta(params.delta);
    Basis b = input;
    const int m = b.rank();
    GsoDecomposition g = compute_gso(b);
    int k = 1;
    long long steps = 0;
    const long long step_cap = 200000 + 2000LL * m * m;
    while (k < m) {
        if (++steps > step_cap) throw Error("lll_reduce: iteration cap exceeded");
        detail::size_reduce_row(b, g.mu, k);
        const double mu = g.mu.at(k, k - 1);
        if (g.norms_sq[k] >= (params.delta - mu * mu) * g.norms_sq[k - 1]) {
            ++k;
        } else {
            detail::col_swap(b, k - 1, k);
            if (stats) ++stats->swaps;
            g = compute_gso(b);
            k = std::max(k - 1, 1);
        }
    }
    return b;
}

}  // namespace latred
