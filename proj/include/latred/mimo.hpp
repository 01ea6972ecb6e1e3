#pragma once

// Complex channel model, square-QAM constellations, the real embedding that
// turns detection into a lattice problem, and AWGN.
//
// Conventions fixed here and stamped into every CSV header:
//   SNR(dB) = 10 log10(n_tx * E_s / sigma^2) per receive antenna,
//   noise is circularly symmetric with E|eps_i|^2 = sigma^2,
//   per-axis symbol levels are {+-1, +-3, ...} and map affinely to
//   u = (s + sqrt(q) - 1) / 2 in {0, ..., sqrt(q) - 1}.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "latred/basis.hpp"
#include "latred/errors.hpp"
#include "latred/linalg.hpp"
#include "latred/rng.hpp"

namespace latred {

using cplx = std::complex<double>;

struct ComplexChannel {
    int n_rx = 0;
    int n_tx = 0;
    std::vector<cplx> entries;  // row-major

    cplx& at(int r, int c) { return entries[static_cast<size_t>(r) * n_tx + c]; }
    const cplx& at(int r, int c) const { return entries[static_cast<size_t>(r) * n_tx + c]; }
};

struct Constellation {
    int order = 0;             // q
    int side = 0;              // sqrt(q) levels per axis
    std::vector<cplx> points;  // index = u_re * side + u_im
    double energy = 0.0;       // mean squared symbol magnitude
};

inline Constellation make_qam(int order) {
    if (order != 4 && order != 16 && order != 64)
        throw ConfigError("constellation order must be 4, 16 or 64, got " + std::to_string(order));
    Constellation c;
    c.order = order;
    c.side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
    c.points.reserve(order);
    double e = 0.0;
    for (int ur = 0; ur < c.side; ++ur)
        for (int ui = 0; ui < c.side; ++ui) {
            const cplx p(2.0 * ur - (c.side - 1), 2.0 * ui - (c.side - 1));
            e += std::norm(p);
            c.points.push_back(p);
        }
    c.energy = e / order;
    return c;
}

struct RealEmbedding {
    int rows = 0;  // 2 n_rx
    int cols = 0;  // 2 n_tx
    Mat matrix;
};

// [[Re B, -Im B], [Im B, Re B]]; multiplying the stacked (Re, Im) image of x
// reproduces the stacked image of Bx.
inline RealEmbedding embed_real(const ComplexChannel& ch) {
    RealEmbedding e;
    e.rows = 2 * ch.n_rx;
    e.cols = 2 * ch.n_tx;
    e.matrix = Mat(e.rows, e.cols);
    for (int r = 0; r < ch.n_rx; ++r)
        for (int c = 0; c < ch.n_tx; ++c) {
            const cplx v = ch.at(r, c);
            e.matrix.at(r, c) = v.real();
            e.matrix.at(r, c + ch.n_tx) = -v.imag();
            e.matrix.at(r + ch.n_rx, c) = v.imag();
            e.matrix.at(r + ch.n_rx, c + ch.n_tx) = v.real();
        }
    return e;
}

inline Vec embed_vector(const std::vector<cplx>& x) {
    Vec v(2 * x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        v[i] = x[i].real();
        v[i + x.size()] = x[i].imag();
    }
    return v;
}

inline std::vector<cplx> unembed_vector(const Vec& v) {
    const size_t n = v.size() / 2;
    std::vector<cplx> x(n);
    for (size_t i = 0; i < n; ++i) x[i] = cplx(v[i], v[i + n]);
    return x;
}

inline ComplexChannel sample_channel(int n_rx, int n_tx, Rng& rng) {
    if (n_rx < 1 || n_tx < 1)
        throw ConfigError("channel dimensions must be >= 1, got " + std::to_string(n_rx) + "x" +
                          std::to_string(n_tx));
    ComplexChannel ch;
    ch.n_rx = n_rx;
    ch.n_tx = n_tx;
    ch.entries.resize(static_cast<size_t>(n_rx) * n_tx);
    for (auto& v : ch.entries) v = rng.cgaussian();
    return ch;
}

inline ComplexChannel sample_channel(int n_rx, int n_tx, uint64_t seed) {
    Rng rng(seed);
    return sample_channel(n_rx, n_tx, rng);
}

// Per-axis affine bijection between constellation symbols and consecutive
// integers: the real and imaginary u-coordinates of all n symbols, stacked
// Re-block first to match embed_vector.
inline IntVec constellation_to_lattice(const std::vector<cplx>& symbols, const Constellation& c) {
    IntVec u(2 * symbols.size());
    const int hi = c.side - 1;
    auto map_axis = [&](double s) -> long long {
        const double ud = (s + hi) / 2.0;
        const long long v = round_half_away(ud);
        if (std::abs(ud - static_cast<double>(v)) > tol::identity || v < 0 || v > hi)
            throw Error("symbol axis value " + std::to_string(s) + " is not a level of " +
                        std::to_string(c.order) + "-QAM");
        return v;
    };
    for (size_t i = 0; i < symbols.size(); ++i) {
        u[i] = map_axis(symbols[i].real());
        u[i + symbols.size()] = map_axis(symbols[i].imag());
    }
    return u;
}

// Inverse map; out-of-range integers are clipped into {0, ..., side-1} and
// flagged per complex symbol.
inline std::vector<cplx> lattice_to_constellation(const IntVec& u, const Constellation& c,
                                                  std::vector<bool>* clipped = nullptr,
                                                  int* clip_count = nullptr) {
    const size_t n = u.size() / 2;
    const long long hi = c.side - 1;
    if (clipped) clipped->assign(n, false);
    auto clip_axis = [&](long long v, size_t sym) -> double {
        long long w = v;
        if (w < 0) w = 0;
        if (w > hi) w = hi;
        if (w != v) {
            if (clipped) (*clipped)[sym] = true;
            if (clip_count) ++*clip_count;
        }
        return 2.0 * static_cast<double>(w) - static_cast<double>(hi);
    };
    std::vector<cplx> s(n);
    for (size_t i = 0; i < n; ++i)
        s[i] = cplx(clip_axis(u[i], i), clip_axis(u[i + n], i));
    return s;
}

inline double snr_to_sigma(double snr_db, int n_tx, const Constellation& c) {
    if (std::isinf(snr_db) && snr_db > 0) return 0.0;
    const double sigma_sq = n_tx * c.energy / std::pow(10.0, snr_db / 10.0);
    return std::sqrt(sigma_sq);
}

inline std::vector<cplx> add_awgn(const std::vector<cplx>& y, double sigma, Rng& rng) {
    if (sigma < 0) throw ConfigError("noise level must be >= 0, got " + std::to_string(sigma));
    std::vector<cplx> out = y;
    for (auto& v : out) v += sigma * rng.cgaussian();
    return out;
}

inline std::vector<cplx> add_awgn(const std::vector<cplx>& y, double sigma, uint64_t seed) {
    Rng rng(seed);
    return add_awgn(y, sigma, rng);
}

// y = Bx for the complex model.
inline std::vector<cplx> channel_apply(const ComplexChannel& ch, const std::vector<cplx>& x) {
    std::vector<cplx> y(static_cast<size_t>(ch.n_rx), cplx(0.0, 0.0));
    for (int r = 0; r < ch.n_rx; ++r)
        for (int c = 0; c < ch.n_tx; ++c) y[static_cast<size_t>(r)] += ch.at(r, c) * x[static_cast<size_t>(c)];
    return y;
}

}  // namespace latred
