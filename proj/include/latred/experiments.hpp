#pragma once

// Monte-Carlo verification engines: empirical proximity ratios against the
// closed-form bound, audits of the per-index inequalities, and BER sweeps.
// Each trial draws from an independent stream keyed by (master_seed, trial),
// so results are identical for any thread count and merge order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "latred/basis.hpp"
#include "latred/bkz.hpp"
#include "latred/bounds.hpp"
#include "latred/detect.hpp"
#include "latred/enumerate.hpp"
#include "latred/gso.hpp"
#include "latred/mimo.hpp"
#include "latred/rng.hpp"

namespace latred {

enum class Ensemble { gaussian, integer, identity };

inline const char* to_string(Ensemble e) {
    switch (e) {
        case Ensemble::gaussian: return "gaussian";
        case Ensemble::integer: return "integer";
        case Ensemble::identity: return "identity";
    }
    return "?";
}

inline Ensemble parse_ensemble(const std::string& s) {
    if (s == "gaussian") return Ensemble::gaussian;
    if (s == "integer") return Ensemble::integer;
    if (s == "identity") return Ensemble::identity;
    throw ConfigError("ensemble must be gaussian, integer or identity, got '" + s + "'");
}

namespace detail {

// One random rank-m basis. Degenerate draws (measure zero, but possible with
// integer entries) are redrawn from the same stream.
inline Basis sample_basis(Ensemble e, int m, Rng& rng) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<Vec> gens;
        switch (e) {
            case Ensemble::identity: {
                gens.assign(static_cast<size_t>(m), Vec(static_cast<size_t>(m), 0.0));
                for (int i = 0; i < m; ++i) gens[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1.0;
                break;
            }
            case Ensemble::gaussian: {
                if (m % 2 == 0) {
                    const ComplexChannel ch = sample_channel(m / 2, m / 2, rng);
                    const RealEmbedding emb = embed_real(ch);
                    gens.reserve(static_cast<size_t>(m));
                    for (int j = 0; j < m; ++j) gens.push_back(emb.matrix.col(j));
                } else {
                    gens.assign(static_cast<size_t>(m), Vec(static_cast<size_t>(m), 0.0));
                    for (auto& v : gens)
                        for (auto& x : v) x = rng.gaussian();
                }
                break;
            }
            case Ensemble::integer: {
                gens.assign(static_cast<size_t>(m), Vec(static_cast<size_t>(m), 0.0));
                for (auto& v : gens)
                    for (auto& x : v) x = static_cast<double>(rng.uniform_int(-50, 50));
                break;
            }
        }
        Basis b = make_basis(std::move(gens));
        try {
            compute_gso(b);
            return b;
        } catch (const RankDeficientError&) {
            continue;
        }
    }
    throw Error("sample_basis: 64 consecutive rank-deficient draws");
}

// Runs f(begin, end, worker) over a contiguous partition of [0, n); callers
// keep one accumulator per worker and merge in worker order, which equals
// trial order because the chunks are contiguous.
template <typename F>
inline void parallel_chunks(long long n, int threads, F&& f) {
    if (threads < 1) threads = 1;
    if (threads == 1 || n < 2) {
        f(0LL, n, 0);
        return;
    }
    if (static_cast<long long>(threads) > n) threads = static_cast<int>(n);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        const long long b = n * w / threads;
        const long long e = n * (w + 1) / threads;
        pool.emplace_back([&f, b, e, w] { f(b, e, w); });
    }
    for (auto& t : pool) t.join();
}

inline std::string fmt_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

// 95% Wilson score interval for err successes out of n.
inline std::pair<double, double> wilson_interval(long long err, long long n) {
    const double z = 1.9599639845400545;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(err) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double hw = z / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    // the endpoints are exact at the boundary and always live in [0, 1]
    const double lo = err == 0 ? 0.0 : std::max(0.0, center - hw);
    const double hi = err == n ? 1.0 : std::min(1.0, center + hw);
    return {lo, hi};
}

inline double wilson_halfwidth(long long err, long long n) {
    const auto [lo, hi] = wilson_interval(err, n);
    return (hi - lo) / 2.0;
}

// ---------------------------------------------------------------------------
// Proximity experiment

struct ProximityConfig {
    int m = 4;
    int beta = 2;
    long long trials = 1000;
    Ensemble ensemble = Ensemble::gaussian;
    std::uint64_t master_seed = 0;
    double delta = 0.99;
    int max_tours = 32;
    int threads = 1;
    int rank_cap = 8;  // exact lambda via enumeration only at desk scale
};

struct ProximityViolation {
    long long trial = 0;
    int index = 0;  // 1-based
    double ratio = 0;
    double bound = 0;
    Basis basis;  // the reduced basis that violated
};

struct ProximityReport {
    ProximityConfig config;
    ProximityBound bound;
    Vec per_index_sup;  // max over trials of lambda^2 / |b_i^perp|^2
    std::vector<ProximityViolation> violations;
};

// Per trial: sample, BKZ-beta-reduce, measure lambda^2 / |b_i^perp|^2 for
// every i, and compare with the per-index and final bounds.
inline ProximityReport run_proximity(const ProximityConfig& cfg) {
    if (cfg.m > cfg.rank_cap)
        throw GuardError("run_proximity: rank " + std::to_string(cfg.m) +
                         " exceeds the exact-enumeration cap of " + std::to_string(cfg.rank_cap));
    if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
    ProximityReport rep;
    rep.config = cfg;
    rep.bound = proximity_bound_sic(cfg.m, cfg.beta);
    rep.per_index_sup.assign(static_cast<size_t>(cfg.m), 0.0);

    ReductionParams params;
    params.delta = cfg.delta;
    params.beta = cfg.beta;
    params.max_tours = cfg.max_tours;

    struct Slot {
        Vec sup;
        std::vector<ProximityViolation> violations;
    };
    const int nw = cfg.threads < 1 ? 1 : cfg.threads;
    std::vector<Slot> slots(static_cast<size_t>(nw));
    for (auto& s : slots) s.sup.assign(static_cast<size_t>(cfg.m), 0.0);

    detail::parallel_chunks(cfg.trials, cfg.threads, [&](long long lo, long long hi, int w) {
        Slot& slot = slots[static_cast<size_t>(w)];
        for (long long t = lo; t < hi; ++t) {
            Rng rng(cfg.master_seed, static_cast<std::uint64_t>(t));
            const Basis b = detail::sample_basis(cfg.ensemble, cfg.m, rng);
            const Basis red = bkz_reduce(b, params);
            const GsoDecomposition g = compute_gso(red);
            const double lambda_sq = svp_enumerate(red, cfg.rank_cap).norm_sq;
            for (int i = 0; i < cfg.m; ++i) {
                const double ratio = lambda_sq / g.norms_sq[static_cast<size_t>(i)];
                slot.sup[static_cast<size_t>(i)] = std::max(slot.sup[static_cast<size_t>(i)], ratio);
                const double per_idx = rep.bound.per_index[static_cast<size_t>(i)];
                const double limit = std::min(per_idx, rep.bound.value);
                if (ratio > limit * (1.0 + tol::identity)) {
                    ProximityViolation v;
                    v.trial = t;
                    v.index = i + 1;
                    v.ratio = ratio;
                    v.bound = limit;
                    v.basis = red;
                    slot.violations.push_back(std::move(v));
                }
            }
        }
    });
    for (const Slot& s : slots) {
        for (int i = 0; i < cfg.m; ++i)
            rep.per_index_sup[static_cast<size_t>(i)] =
                std::max(rep.per_index_sup[static_cast<size_t>(i)], s.sup[static_cast<size_t>(i)]);
        for (const auto& v : s.violations) rep.violations.push_back(v);
    }
    return rep;
}

inline void write_proximity_csv(std::ostream& os, const ProximityReport& rep) {
    const ProximityConfig& c = rep.config;
    os << "# proximity experiment\n";
    os << "# m=" << c.m << " beta=" << c.beta << " trials=" << c.trials
       << " ensemble=" << to_string(c.ensemble) << " master_seed=" << c.master_seed << "\n";
    os << "# delta=" << detail::fmt_g17(c.delta) << " max_tours=" << c.max_tours
       << " gamma_beta=" << detail::fmt_g17(rep.bound.gamma.value) << " ("
       << to_string(rep.bound.gamma.exactness) << ")\n";
    os << "m,beta,ensemble,trials,i,empirical_sup,per_index_bound,theorem_bound,violated\n";
    for (int i = 0; i < c.m; ++i) {
        bool violated = false;
        for (const auto& v : rep.violations) violated = violated || v.index == i + 1;
        os << c.m << ',' << c.beta << ',' << to_string(c.ensemble) << ',' << c.trials << ','
           << (i + 1) << ',' << detail::fmt_g17(rep.per_index_sup[static_cast<size_t>(i)]) << ','
           << detail::fmt_g17(rep.bound.per_index[static_cast<size_t>(i)]) << ','
           << detail::fmt_g17(rep.bound.value) << ',' << (violated ? 1 : 0) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Inequality audit

struct SchnorrAuditConfig {
    int m = 4;
    int beta = 2;
    long long trials = 100;
    Ensemble ensemble = Ensemble::integer;
    std::uint64_t master_seed = 0;
    double delta = 0.99;
    int max_tours = 32;
    int threads = 1;
    int rank_cap = 8;
};

struct SchnorrAudit {
    SchnorrAuditConfig config;
    long long checked = 0;
    long long violations = 0;
    double worst_margin = 1e300;
    long long worst_trial = -1;
    int worst_index = 0;
    std::vector<std::pair<long long, Basis>> violating;  // trial, reduced basis
};

inline SchnorrAudit run_schnorr_audit(const SchnorrAuditConfig& cfg) {
    if (cfg.m > cfg.rank_cap)
        throw GuardError("run_schnorr_audit: rank " + std::to_string(cfg.m) +
                         " exceeds the exact-enumeration cap of " + std::to_string(cfg.rank_cap));
    if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
    ReductionParams params;
    params.delta = cfg.delta;
    params.beta = cfg.beta;
    params.max_tours = cfg.max_tours;

    SchnorrAudit audit;
    audit.config = cfg;
    std::vector<SchnorrAudit> slots(static_cast<size_t>(cfg.threads < 1 ? 1 : cfg.threads));

    detail::parallel_chunks(cfg.trials, cfg.threads, [&](long long lo, long long hi, int w) {
        SchnorrAudit& slot = slots[static_cast<size_t>(w)];
        for (long long t = lo; t < hi; ++t) {
            Rng rng(cfg.master_seed, static_cast<std::uint64_t>(t));
            const Basis b = detail::sample_basis(cfg.ensemble, cfg.m, rng);
            const Basis red = bkz_reduce(b, params);
            const SchnorrReport rep = check_schnorr(red, cfg.beta, cfg.rank_cap);
            ++slot.checked;
            if (rep.worst_margin < slot.worst_margin) {
                slot.worst_margin = rep.worst_margin;
                slot.worst_trial = t;
                slot.worst_index = rep.worst_index;
            }
            if (!rep.all_ok) {
                ++slot.violations;
                slot.violating.emplace_back(t, red);
            }
        }
    });
    for (const SchnorrAudit& s : slots) {
        audit.checked += s.checked;
        audit.violations += s.violations;
        if (s.checked > 0 && s.worst_margin < audit.worst_margin) {
            audit.worst_margin = s.worst_margin;
            audit.worst_trial = s.worst_trial;
            audit.worst_index = s.worst_index;
        }
        for (const auto& v : s.violating) audit.violating.push_back(v);
    }
    return audit;
}

// ---------------------------------------------------------------------------
// Bit/vector error rate sweeps

struct BerConfig {
    int n_tx = 4;
    int n_rx = 4;
    int constellation = 4;
    std::vector<double> snr_db = {20.0};
    long long trials = 10000;
    std::uint64_t master_seed = 0;
    std::vector<std::string> detectors = {"ml", "sic", "lra-bkz-sic"};
    double delta = 0.99;
    int beta = 4;
    int max_tours = 32;
    int threads = 1;
};

struct BerPoint {
    double snr_db = 0;
    long long trials = 0;
    long long vec_errors = 0;
    long long sym_errors = 0;
    double ber = 0;           // symbol error ratio
    double ci_halfwidth = 0;  // Wilson, for the symbol ratio
};

struct BerCurve {
    std::string detector;
    std::vector<BerPoint> points;
};

namespace detail {

inline const std::vector<std::string>& known_detectors() {
    static const std::vector<std::string> ids = {"ml",          "zf",          "mmse",       "sic",
                                                 "lra-lll-sic", "lra-bkz-sic", "lra-kz-sic"};
    return ids;
}

}  // namespace detail

inline void validate_ber_config(const BerConfig& cfg) {
    if (cfg.n_tx < 1) throw ConfigError("n_tx must be >= 1, got " + std::to_string(cfg.n_tx));
    if (cfg.n_rx < cfg.n_tx)
        throw ConfigError("n_rx must be >= n_tx for full column rank, got n_rx=" +
                          std::to_string(cfg.n_rx) + " n_tx=" + std::to_string(cfg.n_tx));
    if (cfg.trials < 1) throw ConfigError("trials must be >= 1, got " + std::to_string(cfg.trials));
    if (cfg.snr_db.empty()) throw ConfigError("snr_db grid must not be empty");
    if (cfg.detectors.empty()) throw ConfigError("detectors list must not be empty");
    make_qam(cfg.constellation);
    const auto& known = detail::known_detectors();
    for (const auto& d : cfg.detectors)
        if (std::find(known.begin(), known.end(), d) == known.end())
            throw ConfigError("unknown detector '" + d + "'");
    const int m = 2 * cfg.n_tx;
    if (cfg.beta < 2 || cfg.beta > m)
        throw ConfigError("beta must lie in [2, 2*n_tx], got " + std::to_string(cfg.beta));
}

// Monte-Carlo error rates with common random numbers: each trial fixes one
// channel, symbol vector and unit-variance noise draw, shared by every
// detector and every SNR point (the noise is scaled per point).
inline std::vector<BerCurve> run_ber(const BerConfig& cfg) {
    validate_ber_config(cfg);
    const Constellation cons = make_qam(cfg.constellation);

    std::vector<std::string> active = cfg.detectors;
    {
        // Exhaustive-equivalent search still underlies ml; honor its cap.
        long long total = 1;
        bool ok = true;
        for (int i = 0; i < cfg.n_tx && ok; ++i) {
            total *= cons.order;
            if (total > (1LL << 20)) ok = false;
        }
        if (!ok)
            active.erase(std::remove(active.begin(), active.end(), "ml"), active.end());
    }
    if (active.empty()) throw ConfigError("no detector admitted by the guards");

    ReductionParams params;
    params.delta = cfg.delta;
    params.beta = cfg.beta;
    params.max_tours = cfg.max_tours;

    const size_t nd = active.size();
    const size_t ns = cfg.snr_db.size();
    std::vector<double> sigmas(ns);
    for (size_t s = 0; s < ns; ++s)
        sigmas[s] = snr_to_sigma(cfg.snr_db[s], cfg.n_tx, cons);

    struct Counts {
        std::vector<long long> vec, sym;  // indexed detector * ns + snr
    };
    const int nw = cfg.threads < 1 ? 1 : cfg.threads;
    std::vector<Counts> slots(static_cast<size_t>(nw));
    for (auto& s : slots) {
        s.vec.assign(nd * ns, 0);
        s.sym.assign(nd * ns, 0);
    }

    detail::parallel_chunks(cfg.trials, cfg.threads, [&](long long lo, long long hi, int w) {
        Counts& slot = slots[static_cast<size_t>(w)];
        for (long long t = lo; t < hi; ++t) {
            Rng rng(cfg.master_seed, static_cast<std::uint64_t>(t));
            ComplexChannel ch;
            while (true) {
                ch = sample_channel(cfg.n_rx, cfg.n_tx, rng);
                try {
                    const detail::RealSystem sys = detail::make_real_system(
                        std::vector<cplx>(static_cast<size_t>(cfg.n_rx)), ch, cons);
                    detail::checked_qr(sys.h);
                    break;
                } catch (const RankDeficientError&) {
                    continue;
                }
            }
            std::vector<cplx> x(static_cast<size_t>(cfg.n_tx));
            for (auto& v : x)
                v = cons.points[static_cast<size_t>(rng.uniform_int(0, cons.order - 1))];
            std::vector<cplx> unit(static_cast<size_t>(cfg.n_rx));
            for (auto& v : unit) v = rng.cgaussian();

            const std::vector<cplx> y0 = channel_apply(ch, x);
            for (size_t s = 0; s < ns; ++s) {
                std::vector<cplx> y = y0;
                for (size_t i = 0; i < y.size(); ++i) y[i] += sigmas[s] * unit[i];
                for (size_t d = 0; d < nd; ++d) {
                    const std::string& id = active[d];
                    DetectionResult r;
                    if (id == "ml") r = detect_ml_sphere(y, ch, cons);
                    else if (id == "zf") r = detect_zf(y, ch, cons);
                    else if (id == "mmse") r = detect_mmse(y, ch, cons, sigmas[s]);
                    else if (id == "sic") r = detect_sic(y, ch, cons);
                    else if (id == "lra-lll-sic")
                        r = detect_lra_sic(y, ch, cons, params, ReductionMethod::lll);
                    else if (id == "lra-bkz-sic")
                        r = detect_lra_sic(y, ch, cons, params, ReductionMethod::bkz);
                    else
                        r = detect_lra_sic(y, ch, cons, params, ReductionMethod::kz);
                    long long wrong = 0;
                    for (size_t i = 0; i < x.size(); ++i)
                        if (r.symbols[i] != x[i]) ++wrong;
                    slot.sym[d * ns + s] += wrong;
                    if (wrong > 0) ++slot.vec[d * ns + s];
                }
            }
        }
    });

    std::vector<BerCurve> curves(nd);
    for (size_t d = 0; d < nd; ++d) {
        curves[d].detector = active[d];
        curves[d].points.resize(ns);
        for (size_t s = 0; s < ns; ++s) {
            long long ve = 0, se = 0;
            for (const auto& slot : slots) {
                ve += slot.vec[d * ns + s];
                se += slot.sym[d * ns + s];
            }
            BerPoint& p = curves[d].points[s];
            p.snr_db = cfg.snr_db[s];
            p.trials = cfg.trials;
            p.vec_errors = ve;
            p.sym_errors = se;
            const long long n_sym = cfg.trials * cfg.n_tx;
            p.ber = static_cast<double>(se) / static_cast<double>(n_sym);
            p.ci_halfwidth = wilson_halfwidth(se, n_sym);
        }
    }
    return curves;
}

inline void write_ber_csv(std::ostream& os, const std::vector<BerCurve>& curves,
                          const BerConfig& cfg) {
    os << "# error-rate sweep\n";
    os << "# n_tx=" << cfg.n_tx << " n_rx=" << cfg.n_rx << " constellation=" << cfg.constellation
       << " trials=" << cfg.trials << " master_seed=" << cfg.master_seed << "\n";
    os << "# delta=" << detail::fmt_g17(cfg.delta) << " beta=" << cfg.beta
       << " max_tours=" << cfg.max_tours << "\n";
    os << "# snr convention: snr_db = 10*log10(n_tx * E_s / sigma^2) per receive antenna\n";
    os << "# quantizer: round half away from zero in u = (s + sqrt(q) - 1)/2 coordinates\n";
    os << "detector,snr_db,trials,vec_errors,sym_errors,ber,ci_halfwidth\n";
    for (const auto& c : curves)
        for (const auto& p : c.points)
            os << c.detector << ',' << detail::fmt_g17(p.snr_db) << ',' << p.trials << ','
               << p.vec_errors << ',' << p.sym_errors << ',' << detail::fmt_g17(p.ber) << ','
               << detail::fmt_g17(p.ci_halfwidth) << '\n';
}

// ---------------------------------------------------------------------------
// Bound table and counterexample archiving

inline void write_bound_csv(std::ostream& os, const std::vector<ProximityBound>& rows) {
    os << "m,beta,gamma_beta,exactness,bound,per_index_json\n";
    for (const auto& b : rows) {
        os << b.m << ',' << b.beta << ',' << detail::fmt_g17(b.gamma.value) << ','
           << to_string(b.gamma.exactness) << ',' << detail::fmt_g17(b.value) << ",\"[";
        for (size_t i = 0; i < b.per_index.size(); ++i)
            os << (i ? ", " : "") << detail::fmt_g17(b.per_index[i]);
        os << "]\"\n";
    }
}

inline void save_counterexample(const std::string& path, const Basis& basis,
                                const std::string& parameters) {
    save_basis(path, basis, parameters);
}

}  // namespace latred
