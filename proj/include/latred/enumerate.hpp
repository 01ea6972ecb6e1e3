#pragma once

// Exact shortest-vector search (Schnorr-Euchner depth first enumeration)
// and successive minima via exhaustion of a proven ball.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "latred/basis.hpp"
#include "latred/gso.hpp"
#include "latred/lll.hpp"

namespace latred {

struct SvpResult {
    IntVec coeffs;      // w.r.t. the generators of the queried basis
    double norm_sq = 0; // recomputed from basis * coeffs
};

namespace detail {

// Relative slack used both for pruning and for collecting near-ties.
inline constexpr double enum_slack = 1e-9;

// Flip so the first nonzero coefficient is positive.
inline void canonical_sign(IntVec& x) {
    for (long long v : x) {
        if (v > 0) return;
        if (v < 0) {
            for (auto& t : x) t = -t;
            return;
        }
    }
}

struct EnumCollector {
    double bound;          // squared radius, inclusive up to slack
    bool shrink;           // tighten the bound at each shorter leaf
    std::vector<std::pair<double, IntVec>> found;
};

// DFS over levels m-1 .. 0. Candidates at a level are visited in order of
// distance from the real center, so the first candidate past the bound ends
// the level. Only one of each +-x pair is visited: while every coefficient
// above the current level is zero, the current coefficient stays >= 0.
class Enumerator {
public:
    Enumerator(const GsoDecomposition& g, EnumCollector& out)
        : g_(g), out_(out), m_(static_cast<int>(g.norms_sq.size())), x_(m_, 0) {}

    void run() { descend(m_ - 1, 0.0, true); }

private:
    void descend(int t, double dist_above, bool topzero) {
        const double c = g_.norms_sq[static_cast<size_t>(t)];
        double center = 0.0;
        for (int j = t + 1; j < m_; ++j) center -= static_cast<double>(x_[j]) * g_.mu.at(j, t);
        const long long x0 = topzero ? 0 : std::llround(center);
        const long long dir = (center >= static_cast<double>(x0)) ? 1 : -1;
        for (long long k = 0;; ++k) {
            long long x;
            if (topzero) {
                x = k;  // center == 0 here, so 0, 1, 2, ... is the distance order
            } else {
                const long long off = (k % 2 == 1) ? dir * ((k + 1) / 2) : -dir * (k / 2);
                x = x0 + off;
            }
            const double r = static_cast<double>(x) - center;
            const double d = dist_above + c * r * r;
            if (d > out_.bound * (1.0 + enum_slack)) break;
            x_[t] = x;
            const bool sub_topzero = topzero && x == 0;
            if (t == 0) {
                if (!sub_topzero) {  // excludes the zero vector
                    if (out_.shrink && d < out_.bound) out_.bound = d;
                    out_.found.emplace_back(d, x_);
                }
            } else {
                descend(t - 1, d, sub_topzero);
            }
        }
        x_[t] = 0;
    }

    const GsoDecomposition& g_;
    EnumCollector& out_;
    int m_;
    IntVec x_;
};

}  // namespace detail

// Exact shortest nonzero vector. The basis is reduced internally first; the
// returned coefficients refer to the generators as passed in. Ties resolve to
// the lexicographically least coefficient vector whose first nonzero entry is
// positive.
inline SvpResult svp_enumerate(const Basis& basis, int rank_cap = 12) {
    const int m = basis.rank();
    if (m > rank_cap)
        throw GuardError("svp_enumerate: rank " + std::to_string(m) +
                         " exceeds the enumeration cap of " + std::to_string(rank_cap));
    Basis fresh = make_basis(basis.gens);
    const Basis red = lll_reduce(fresh);
    const GsoDecomposition g = compute_gso(red);

    double bound = norm_sq(red.gens[0]);
    for (const Vec& v : red.gens) bound = std::min(bound, norm_sq(v));

    detail::EnumCollector out{bound, true, {}};
    detail::Enumerator(g, out).run();
    if (out.found.empty()) throw Error("svp_enumerate: no candidate found");

    // Re-measure every candidate against the original generators and keep the
    // exact minimum; the float DFS bound only pre-screens.
    double best = -1.0;
    std::vector<std::pair<double, IntVec>> exact;
    exact.reserve(out.found.size());
    for (auto& [d, xr] : out.found) {
        IntVec x = int_mat_vec(red.transform, xr);
        detail::canonical_sign(x);
        const double n = norm_sq(lattice_point(basis, x));
        exact.emplace_back(n, std::move(x));
        if (best < 0.0 || n < best) best = n;
    }
    IntVec pick;
    for (auto& [n, x] : exact) {
        if (n > best * (1.0 + detail::enum_slack)) continue;
        if (pick.empty() || std::lexicographical_compare(x.begin(), x.end(), pick.begin(), pick.end()))
            pick = x;
    }
    SvpResult res;
    res.norm_sq = norm_sq(lattice_point(basis, pick));
    res.coeffs = std::move(pick);
    return res;
}

// First k successive minima with realizing vectors. Enumeration radius is the
// k-th smallest reduced generator norm, whose ball provably contains k
// independent lattice vectors; independence is decided in exact integer
// arithmetic.
inline std::vector<SvpResult> successive_minima(const Basis& basis, int k, int rank_cap = 12) {
    const int m = basis.rank();
    if (k < 1 || k > m) throw Error("successive_minima: k must lie in [1, rank]");
    if (m > rank_cap)
        throw GuardError("successive_minima: rank " + std::to_string(m) +
                         " exceeds the enumeration cap of " + std::to_string(rank_cap));
    Basis fresh = make_basis(basis.gens);
    const Basis red = lll_reduce(fresh);
    const GsoDecomposition g = compute_gso(red);

    std::vector<double> gen_norms;
    gen_norms.reserve(red.gens.size());
    for (const Vec& v : red.gens) gen_norms.push_back(norm_sq(v));
    std::sort(gen_norms.begin(), gen_norms.end());
    const double radius = gen_norms[static_cast<size_t>(k - 1)];

    detail::EnumCollector out{radius, false, {}};
    detail::Enumerator(g, out).run();

    std::vector<std::pair<double, IntVec>> cands;
    cands.reserve(out.found.size());
    for (auto& [d, xr] : out.found) {
        IntVec x = int_mat_vec(red.transform, xr);
        detail::canonical_sign(x);
        cands.emplace_back(norm_sq(lattice_point(basis, x)), std::move(x));
    }
    std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return std::lexicographical_compare(a.second.begin(), a.second.end(),
                                            b.second.begin(), b.second.end());
    });

    std::vector<SvpResult> minima;
    std::vector<IntVec> chosen;
    for (auto& [n, x] : cands) {
        if (static_cast<int>(minima.size()) == k) break;
        std::vector<IntVec> trial = chosen;
        trial.push_back(x);
        if (int_rank(trial) != static_cast<int>(trial.size())) continue;
        chosen.push_back(x);
        SvpResult r;
        r.coeffs = x;
        r.norm_sq = n;
        minima.push_back(std::move(r));
    }
    if (static_cast<int>(minima.size()) != k)
        throw Error("successive_minima: enumeration ball missed an independent vector");
    return minima;
}

}  // namespace latred
