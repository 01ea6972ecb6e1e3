#pragma once

// Gram-Schmidt orthogonalization and the projection utilities the reducers
// are built from.

#include <cmath>
#include <string>
#include <vector>

#include "latred/basis.hpp"
#include "latred/linalg.hpp"

namespace latred {

struct GsoDecomposition {
    std::vector<Vec> ortho;  // orthogonalized generators
    Mat mu;                  // lower triangular, unit diagonal; mu(i,j) for j < i
    Vec norms_sq;            // squared lengths of the orthogonalized generators
};

// Modified Gram-Schmidt. Throws RankDeficientError naming the first
// dependent generator.
inline GsoDecomposition compute_gso(const Basis& b) {
    const int m = b.rank();
    GsoDecomposition g;
    g.ortho.reserve(m);
    g.mu = Mat::identity(m);
    g.norms_sq.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        Vec u = b.gens[i];
        const double input_norm_sq = norm_sq(u);
        for (int j = 0; j < i; ++j) {
            const double c = dot(u, g.ortho[j]) / g.norms_sq[j];
            g.mu.at(i, j) = c;
            axpy_sub(u, c, g.ortho[j]);
        }
        const double n = norm_sq(u);
        if (!(n > tol::rank_ratio_sq * input_norm_sq) || input_norm_sq == 0.0)
            throw RankDeficientError(
                i, "rank-deficient basis: generator " + std::to_string(i) +
                       " is linearly dependent on its predecessors");
        g.norms_sq[i] = n;
        g.ortho.push_back(std::move(u));
    }
    return g;
}

// Squared lattice determinant (Gram determinant), the product of the
// orthogonalized squared norms.
inline double gram_determinant(const Basis& b) {
    const GsoDecomposition g = compute_gso(b);
    double p = 1.0;
    for (double n : g.norms_sq) p *= n;
    return p;
}

namespace detail {

// b_col <- b_col - q * b_other, on both the generators and the transform.
inline void col_addmul_sub(Basis& b, int col, long long q, int other) {
    for (int i = 0; i < b.dim(); ++i)
        b.gens[col][i] -= static_cast<double>(q) * b.gens[other][i];
    for (int r = 0; r < b.transform.rows; ++r)
        b.transform.at(r, col) -= q * b.transform.at(r, other);
}

inline void col_swap(Basis& b, int i, int j) {
    b.gens[i].swap(b.gens[j]);
    for (int r = 0; r < b.transform.rows; ++r)
        std::swap(b.transform.at(r, i), b.transform.at(r, j));
}

// Size-reduce generator i against all earlier ones, updating mu row i in
// place. The orthogonalization itself is unchanged by these column ops.
inline void size_reduce_row(Basis& b, Mat& mu, int i) {
    for (int j = i - 1; j >= 0; --j) {
        const double m = mu.at(i, j);
        if (std::abs(m) <= 0.5 + tol::identity) continue;
        const long long q = round_half_away(m);
        col_addmul_sub(b, i, q, j);
        for (int t = 0; t < j; ++t) mu.at(i, t) -= static_cast<double>(q) * mu.at(j, t);
        mu.at(i, j) -= static_cast<double>(q);
    }
}

}  // namespace detail

// All |mu(i,j)| <= 1/2 (+ tolerance) without changing the lattice.
inline Basis size_reduce(const Basis& b) {
    Basis out = b;
    GsoDecomposition g = compute_gso(out);
    for (int i = 1; i < out.rank(); ++i) detail::size_reduce_row(out, g.mu, i);
    return out;
}

namespace detail {

inline Basis project_block_with(const Basis& b, const GsoDecomposition& g, int start, int end) {
    std::vector<Vec> proj;
    proj.reserve(end - start);
    for (int j = start; j < end; ++j) {
        // pi(b_j) = sum_{i in [start, j]} mu(j,i) * ortho_i
        Vec p(b.dim(), 0.0);
        for (int i = start; i <= j; ++i) {
            const double c = g.mu.at(j, i);
            for (int t = 0; t < b.dim(); ++t) p[t] += c * g.ortho[i][t];
        }
        proj.push_back(std::move(p));
    }
    return make_basis(std::move(proj));
}

}  // namespace detail

// Projections of generators [start, end) onto the orthogonal complement of
// the span of the first `start` generators. Indices are 0-based, half-open.
// The result is a fresh basis (identity transform) of rank end - start in the
// original ambient dimension.
inline Basis project_block(const Basis& b, int start, int end) {
    if (start < 0 || start >= end || end > b.rank())
        throw Error("project_block: invalid range [" + std::to_string(start) + ", " +
                    std::to_string(end) + ") for rank " + std::to_string(b.rank()));
    return detail::project_block_with(b, compute_gso(b), start, end);
}

}  // namespace latred
