#pragma once

// Block Korkine-Zolotarev reduction: LLL preprocessing, then tours of exact
// shortest-vector insertions on projected blocks until a tour changes nothing.

#include <algorithm>
#include <string>

#include "latred/basis.hpp"
#include "latred/enumerate.hpp"
#include "latred/gso.hpp"
#include "latred/lll.hpp"

namespace latred {

namespace detail {

// A new block column must beat |b_i^perp|^2 by this factor to be inserted.
inline constexpr double insertion_eps = 1e-9;

// Replace columns [start, start+T.cols) by their combinations under T,
// keeping the unimodular bookkeeping exact.
inline void apply_block_transform(Basis& b, int start, const IntMat& t) {
    const int w = t.cols;
    std::vector<Vec> old_gens(b.gens.begin() + start, b.gens.begin() + start + w);
    std::vector<IntVec> old_cols(static_cast<size_t>(w),
                                 IntVec(static_cast<size_t>(b.transform.rows), 0));
    for (int l = 0; l < w; ++l)
        for (int r = 0; r < b.transform.rows; ++r)
            old_cols[static_cast<size_t>(l)][static_cast<size_t>(r)] = b.transform.at(r, start + l);
    for (int c = 0; c < w; ++c) {
        Vec g(b.dim(), 0.0);
        IntVec tc(static_cast<size_t>(b.transform.rows), 0);
        for (int l = 0; l < w; ++l) {
            const long long f = t.at(l, c);
            if (f == 0) continue;
            for (int r = 0; r < b.dim(); ++r)
                g[static_cast<size_t>(r)] += static_cast<double>(f) * old_gens[static_cast<size_t>(l)][static_cast<size_t>(r)];
            for (int r = 0; r < b.transform.rows; ++r)
                tc[static_cast<size_t>(r)] += f * old_cols[static_cast<size_t>(l)][static_cast<size_t>(r)];
        }
        b.gens[static_cast<size_t>(start + c)] = std::move(g);
        for (int r = 0; r < b.transform.rows; ++r)
            b.transform.at(r, start + c) = tc[static_cast<size_t>(r)];
    }
}

}  // namespace detail

inline Basis bkz_reduce(const Basis& input, const ReductionParams& params = {},
                        ReductionStats* stats = nullptr) {
    const int m = input.rank();
    if (params.beta < 2 || params.beta > m)
        throw Error("bkz_reduce: block size must lie in [2, rank], got " +
                    std::to_string(params.beta));
    detail::validate_delta(params.delta);

    Basis b = lll_reduce(input, params, stats);
    for (int tour = 0; tour < params.max_tours; ++tour) {
        if (stats) ++stats->tours;
        bool changed = false;
        for (int i = 0; i + 1 < m; ++i) {
            const int e = std::min(i + params.beta, m);
            const GsoDecomposition g = compute_gso(b);
            const Basis block = detail::project_block_with(b, g, i, e);
            const SvpResult sv = svp_enumerate(block, params.enum_rank_cap);
            if (sv.norm_sq < (1.0 - detail::insertion_eps) * g.norms_sq[static_cast<size_t>(i)]) {
                detail::apply_block_transform(b, i, complete_unimodular(sv.coeffs));
                if (stats) ++stats->insertions;
                b = lll_reduce(b, params, stats);
                changed = true;
            }
        }
        if (!changed) break;
    }
    return b;
}

// Korkine-Zolotarev: the full-size block case.
inline Basis kz_reduce(const Basis& input, const ReductionParams& params = {},
                       ReductionStats* stats = nullptr) {
    if (input.rank() < 2) return lll_reduce(input, params, stats);
    ReductionParams p = params;
    p.beta = input.rank();
    return bkz_reduce(input, p, stats);
}

}  // namespace latred
