#pragma once

// The detector family over the real embedding: exhaustive and sphere ML,
// linear ZF / MMSE, nearest-plane SIC, and reduction-aided SIC.
//
// All quantizing detectors work in u-coordinates, u = (s + sqrt(q)-1)/2,
// where the system becomes y' = H'u + eps with H' = 2 embed(B) and
// y' = embed(y) + (sqrt(q)-1) embed(B) 1. Rounding is always half away
// from zero, and clipping into the constellation box happens after any
// unimodular back-map, never in reduced coordinates.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "latred/basis.hpp"
#include "latred/bkz.hpp"
#include "latred/errors.hpp"
#include "latred/gso.hpp"
#include "latred/linalg.hpp"
#include "latred/lll.hpp"
#include "latred/mimo.hpp"

namespace latred {

enum class ReductionMethod { none, lll, bkz, kz };

inline const char* to_string(ReductionMethod m) {
    switch (m) {
        case ReductionMethod::none: return "none";
        case ReductionMethod::lll: return "lll";
        case ReductionMethod::bkz: return "bkz";
        case ReductionMethod::kz: return "kz";
    }
    return "?";
}

struct DetectionResult {
    std::vector<cplx> symbols;  // constellation points, one per transmit antenna
    IntVec lattice_point;       // u-domain coordinates before clipping
    std::vector<bool> clipped;  // per transmit antenna
    double objective = 0.0;     // |y - B symbols|^2
};

namespace detail {

struct RealSystem {
    Mat h;   // 2 n_rx x 2 n_tx, u-domain channel
    Vec y;   // u-domain received vector
    int n;   // 2 n_tx
    long long hi;  // side - 1
};

inline RealSystem make_real_system(const std::vector<cplx>& y, const ComplexChannel& ch,
                                   const Constellation& c) {
    if (static_cast<int>(y.size()) != ch.n_rx)
        throw ConfigError("received vector length " + std::to_string(y.size()) +
                          " does not match " + std::to_string(ch.n_rx) + " receive antennas");
    const RealEmbedding e = embed_real(ch);
    RealSystem s;
    s.n = e.cols;
    s.hi = c.side - 1;
    s.h = Mat(e.rows, e.cols);
    s.y = embed_vector(y);
    for (int r = 0; r < e.rows; ++r) {
        double shift = 0.0;
        for (int j = 0; j < e.cols; ++j) {
            s.h.at(r, j) = 2.0 * e.matrix.at(r, j);
            shift += e.matrix.at(r, j);
        }
        s.y[static_cast<size_t>(r)] += static_cast<double>(s.hi) * shift;
    }
    return s;
}

inline QrFactorization checked_qr(const Mat& a) {
    QrFactorization qr = qr_factor(a);
    double dmax = 0.0;
    for (int i = 0; i < a.cols; ++i) dmax = std::max(dmax, qr.r.at(i, i));
    for (int i = 0; i < a.cols; ++i)
        if (!(qr.r.at(i, i) > 1e-12 * dmax))
            throw RankDeficientError(i, "channel is rank deficient at column " + std::to_string(i));
    return qr;
}

// Clip u into the constellation box, map to symbols, and evaluate the
// complex-model objective; every detector reports through this.
inline DetectionResult finish(const std::vector<cplx>& y, const ComplexChannel& ch,
                              const Constellation& c, IntVec u) {
    DetectionResult r;
    r.symbols = lattice_to_constellation(u, c, &r.clipped);
    r.lattice_point = std::move(u);
    const std::vector<cplx> yh = channel_apply(ch, r.symbols);
    double obj = 0.0;
    for (size_t i = 0; i < y.size(); ++i) obj += std::norm(y[i] - yh[i]);
    r.objective = obj;
    return r;
}

// Nearest-plane back-substitution on R z ~ qhat. Each layer center is
// rounded half away from zero; when 0 <= clamp_hi, the propagated value is
// clamped into [0, clamp_hi] (plain SIC), otherwise left free (reduced
// coordinates). Returns the unclamped roundings.
inline IntVec nearest_plane(const Mat& r, const Vec& qhat, long long clamp_hi) {
    const int n = r.cols;
    IntVec raw(static_cast<size_t>(n), 0);
    IntVec used(static_cast<size_t>(n), 0);
    for (int t = n - 1; t >= 0; --t) {
        double acc = qhat[static_cast<size_t>(t)];
        for (int j = t + 1; j < n; ++j)
            acc -= r.at(t, j) * static_cast<double>(used[static_cast<size_t>(j)]);
        const double center = acc / r.at(t, t);
        const long long v = round_half_away(center);
        raw[static_cast<size_t>(t)] = v;
        used[static_cast<size_t>(t)] =
            clamp_hi >= 0 ? std::clamp(v, 0LL, clamp_hi) : v;
    }
    return raw;
}

inline std::vector<long long> symbol_indices(const IntVec& u, int side) {
    const size_t n = u.size() / 2;
    std::vector<long long> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = u[i] * side + u[i + n];
    return idx;
}

}  // namespace detail

// Global minimizer of |y - Bx|^2 over the full codebook; the desk-scale
// oracle. Ties break lexicographically on per-antenna symbol indices.
inline DetectionResult detect_ml_exhaustive(const std::vector<cplx>& y, const ComplexChannel& ch,
                                            const Constellation& c) {
    if (static_cast<int>(y.size()) != ch.n_rx)
        throw ConfigError("received vector length " + std::to_string(y.size()) +
                          " does not match " + std::to_string(ch.n_rx) + " receive antennas");
    long long total = 1;
    for (int i = 0; i < ch.n_tx; ++i) {
        total *= c.order;
        if (total > (1LL << 20))
            throw GuardError("exhaustive search over " + std::to_string(c.order) + "^" +
                             std::to_string(ch.n_tx) + " codewords exceeds the 2^20 cap");
    }
    std::vector<cplx> x(static_cast<size_t>(ch.n_tx));
    std::vector<long long> idx(static_cast<size_t>(ch.n_tx), 0);
    std::vector<long long> best_idx;
    double best = -1.0;
    for (long long code = 0; code < total; ++code) {
        long long rem = code;
        for (int i = ch.n_tx - 1; i >= 0; --i) {
            idx[static_cast<size_t>(i)] = rem % c.order;
            rem /= c.order;
        }
        for (int i = 0; i < ch.n_tx; ++i)
            x[static_cast<size_t>(i)] = c.points[static_cast<size_t>(idx[static_cast<size_t>(i)])];
        const std::vector<cplx> yh = channel_apply(ch, x);
        double obj = 0.0;
        for (size_t i = 0; i < y.size(); ++i) obj += std::norm(y[i] - yh[i]);
        if (best < 0.0 || obj < best) {
            best = obj;
            best_idx = idx;
        }
    }
    IntVec u(2 * static_cast<size_t>(ch.n_tx));
    for (int i = 0; i < ch.n_tx; ++i) {
        u[static_cast<size_t>(i)] = best_idx[static_cast<size_t>(i)] / c.side;
        u[static_cast<size_t>(i) + ch.n_tx] = best_idx[static_cast<size_t>(i)] % c.side;
    }
    return detail::finish(y, ch, c, std::move(u));
}

namespace detail {

// Box-constrained Schnorr-Euchner search over u, seeded with the SIC point.
class SphereSearch {
public:
    SphereSearch(const Mat& r, const Vec& qhat, long long hi)
        : r_(r), qhat_(qhat), hi_(hi), n_(r.cols), u_(static_cast<size_t>(n_), 0) {}

    std::vector<std::pair<double, IntVec>> run(double initial_bound) {
        bound_ = initial_bound;
        descend(n_ - 1, 0.0);
        return std::move(found_);
    }

private:
    void descend(int t, double dist_above) {
        double acc = qhat_[static_cast<size_t>(t)];
        for (int j = t + 1; j < n_; ++j)
            acc -= r_.at(t, j) * static_cast<double>(u_[static_cast<size_t>(j)]);
        const double center = acc / r_.at(t, t);
        const double w = r_.at(t, t) * r_.at(t, t);
        // All box levels ordered by distance from the center, nearest first.
        std::vector<long long> order;
        order.reserve(static_cast<size_t>(hi_) + 1);
        for (long long v = 0; v <= hi_; ++v) order.push_back(v);
        std::sort(order.begin(), order.end(), [&](long long a, long long b) {
            const double da = std::abs(static_cast<double>(a) - center);
            const double db = std::abs(static_cast<double>(b) - center);
            if (da != db) return da < db;
            return a < b;
        });
        for (long long v : order) {
            const double rres = static_cast<double>(v) - center;
            const double d = dist_above + w * rres * rres;
            if (d > bound_ * (1.0 + slack_)) break;
            u_[static_cast<size_t>(t)] = v;
            if (t == 0) {
                if (d < bound_) bound_ = d;
                found_.emplace_back(d, u_);
            } else {
                descend(t - 1, d);
            }
        }
    }

    const Mat& r_;
    const Vec& qhat_;
    long long hi_;
    int n_;
    IntVec u_;
    double bound_ = 0.0;
    static constexpr double slack_ = 1e-9;
    std::vector<std::pair<double, IntVec>> found_;
};

}  // namespace detail

// Exact ML by sphere decoding: identical output to the exhaustive search.
inline DetectionResult detect_ml_sphere(const std::vector<cplx>& y, const ComplexChannel& ch,
                                        const Constellation& c) {
    const detail::RealSystem s = detail::make_real_system(y, ch, c);
    const QrFactorization qr = detail::checked_qr(s.h);
    const Vec qhat = qr.apply_qt(s.y);

    const IntVec raw = detail::nearest_plane(qr.r, qhat, s.hi);
    IntVec babai(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) babai[i] = std::clamp(raw[i], 0LL, s.hi);
    double babai_obj = 0.0;
    {
        Vec res = qhat;
        for (int t = 0; t < s.n; ++t)
            for (int j = t; j < s.n; ++j)
                res[static_cast<size_t>(t)] -= qr.r.at(t, j) * static_cast<double>(babai[static_cast<size_t>(j)]);
        for (int t = 0; t < s.n; ++t) babai_obj += res[static_cast<size_t>(t)] * res[static_cast<size_t>(t)];
    }

    detail::SphereSearch search(qr.r, qhat, s.hi);
    auto cands = search.run(babai_obj + 1e-9 * (1.0 + babai_obj));

    // Re-rank candidates with the complex-model objective and the exhaustive
    // search's lexicographic tie rule so the two ML paths agree bit for bit.
    IntVec pick;
    std::vector<long long> pick_idx;
    double best = -1.0;
    for (auto& [d, u] : cands) {
        const std::vector<cplx> xs = lattice_to_constellation(u, c);
        const std::vector<cplx> yh = channel_apply(ch, xs);
        double obj = 0.0;
        for (size_t i = 0; i < y.size(); ++i) obj += std::norm(y[i] - yh[i]);
        const std::vector<long long> idx = detail::symbol_indices(u, c.side);
        if (best < 0.0 || obj < best ||
            (obj == best && std::lexicographical_compare(idx.begin(), idx.end(),
                                                         pick_idx.begin(), pick_idx.end()))) {
            best = obj;
            pick = u;
            pick_idx = idx;
        }
    }
    return detail::finish(y, ch, c, std::move(pick));
}

// Pseudo-inverse, then per-axis quantization.
inline DetectionResult detect_zf(const std::vector<cplx>& y, const ComplexChannel& ch,
                                 const Constellation& c) {
    const detail::RealSystem s = detail::make_real_system(y, ch, c);
    const QrFactorization qr = detail::checked_qr(s.h);
    const Vec ud = back_substitute(qr.r, qr.apply_qt(s.y));
    IntVec u(ud.size());
    for (size_t i = 0; i < ud.size(); ++i) u[i] = round_half_away(ud[i]);
    return detail::finish(y, ch, c, std::move(u));
}

// Regularized linear filter (B^H B + (sigma^2/E_s) I)^{-1} B^H, then the ZF
// quantizer. sigma = 0 degenerates to ZF.
inline DetectionResult detect_mmse(const std::vector<cplx>& y, const ComplexChannel& ch,
                                   const Constellation& c, double sigma) {
    if (sigma < 0) throw ConfigError("noise level must be >= 0, got " + std::to_string(sigma));
    if (sigma == 0.0) return detect_zf(y, ch, c);
    if (static_cast<int>(y.size()) != ch.n_rx)
        throw ConfigError("received vector length " + std::to_string(y.size()) +
                          " does not match " + std::to_string(ch.n_rx) + " receive antennas");
    const RealEmbedding e = embed_real(ch);
    const Mat ht = transpose(e.matrix);
    Mat g = mat_mul(ht, e.matrix);
    const double reg = sigma * sigma / c.energy;
    for (int i = 0; i < g.rows; ++i) g.at(i, i) += reg;
    const Vec xt = spd_solve(g, mat_vec(ht, embed_vector(y)));
    IntVec u(xt.size());
    for (size_t i = 0; i < xt.size(); ++i)
        u[i] = round_half_away((xt[i] + static_cast<double>(c.side - 1)) / 2.0);
    return detail::finish(y, ch, c, std::move(u));
}

// Layered nearest-plane detection on the unreduced basis, clamping each
// layer into the box before cancelling it.
inline DetectionResult detect_sic(const std::vector<cplx>& y, const ComplexChannel& ch,
                                  const Constellation& c) {
    const detail::RealSystem s = detail::make_real_system(y, ch, c);
    const QrFactorization qr = detail::checked_qr(s.h);
    const IntVec raw = detail::nearest_plane(qr.r, qr.apply_qt(s.y), s.hi);
    return detail::finish(y, ch, c, raw);
}

// Reduce the u-domain channel basis, run unconstrained nearest-plane in
// reduced coordinates, map back through the unimodular transform, then clip.
inline DetectionResult detect_lra_sic(const std::vector<cplx>& y, const ComplexChannel& ch,
                                      const Constellation& c, const ReductionParams& params = {},
                                      ReductionMethod method = ReductionMethod::lll) {
    const detail::RealSystem s = detail::make_real_system(y, ch, c);
    std::vector<Vec> cols;
    cols.reserve(static_cast<size_t>(s.n));
    for (int j = 0; j < s.n; ++j) cols.push_back(s.h.col(j));
    Basis basis = make_basis(std::move(cols));
    switch (method) {
        case ReductionMethod::none: break;
        case ReductionMethod::lll: basis = lll_reduce(basis, params); break;
        case ReductionMethod::bkz: basis = bkz_reduce(basis, params); break;
        case ReductionMethod::kz: basis = kz_reduce(basis, params); break;
    }
    Mat hr(s.h.rows, s.n);
    for (int j = 0; j < s.n; ++j)
        for (int i = 0; i < s.h.rows; ++i) hr.at(i, j) = basis.gens[static_cast<size_t>(j)][static_cast<size_t>(i)];
    const QrFactorization qr = detail::checked_qr(hr);
    const IntVec z = detail::nearest_plane(qr.r, qr.apply_qt(s.y), -1);
    const IntVec u = int_mat_vec(basis.transform, z);
    return detail::finish(y, ch, c, u);
}

}  // namespace latred
