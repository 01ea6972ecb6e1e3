// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here, not configurable.

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "latred/latred.hpp"
#include "oracles.hpp"

using namespace latred;

namespace {

int failures = 0;

using Verdict = std::pair<bool, std::string>;

void criterion(int n, const std::string& what, const std::function<Verdict()>& f) {
    bool ok = false;
    std::string detail;
    try {
        std::tie(ok, detail) = f();
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    std::printf("%s criterion %d: %s%s%s%s\n", ok ? "PASS" : "FAIL", n, what.c_str(),
                detail.empty() ? "" : " (", detail.c_str(), detail.empty() ? "" : ")");
    std::fflush(stdout);
}

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

Basis random_int_basis(Rng& rng, int m, long long lo, long long hi) {
    while (true) {
        std::vector<Vec> gens(static_cast<size_t>(m), Vec(static_cast<size_t>(m), 0.0));
        for (auto& g : gens)
            for (auto& v : g) v = static_cast<double>(rng.uniform_int(lo, hi));
        Basis b = make_basis(std::move(gens));
        try {
            compute_gso(b);
            return b;
        } catch (const RankDeficientError&) {
        }
    }
}

std::vector<cplx> pick_symbols(const Constellation& c, int n, Rng& rng) {
    std::vector<cplx> x(static_cast<size_t>(n));
    for (auto& v : x) v = c.points[static_cast<size_t>(rng.uniform_int(0, c.order - 1))];
    return x;
}

Verdict closed_form_bound() {
    const double v22 = proximity_bound_sic(2, 2).value;
    const double v42 = proximity_bound_sic(4, 2).value;
    const bool ok = rel_err(v22, 20.0 / 9.0) <= 1e-12 && rel_err(v42, 7168.0 / 729.0) <= 1e-12;
    char buf[128];
    std::snprintf(buf, sizeof buf, "(2,2)=%.17g (4,2)=%.17g", v22, v42);
    return {ok, buf};
}

Verdict empirical_bound() {
    long long violations = 0;
    long long combos = 0;
    for (int m = 2; m <= 6; ++m)
        for (int beta = 2; beta <= m; ++beta)
            for (const Ensemble e : {Ensemble::gaussian, Ensemble::integer}) {
                ProximityConfig cfg;
                cfg.m = m;
                cfg.beta = beta;
                cfg.trials = 500;
                cfg.ensemble = e;
                cfg.master_seed = 424200u + static_cast<std::uint64_t>(m) * 100 +
                                  static_cast<std::uint64_t>(beta) * 10 +
                                  (e == Ensemble::gaussian ? 0 : 1);
                cfg.threads = 4;
                const ProximityReport rep = run_proximity(cfg);
                violations += static_cast<long long>(rep.violations.size());
                ++combos;
            }
    char buf[128];
    std::snprintf(buf, sizeof buf, "%lld violations over %lld (m,beta,ensemble) runs x 500 trials",
                  violations, combos);
    return {violations == 0, buf};
}

Verdict reduction_correctness() {
    Rng rng(30303);
    int bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int m = 2 + trial % 7;  // 2..8
        const Basis b = random_int_basis(rng, m, -50, 50);
        ReductionParams p;
        p.beta = 2 + trial % (m - 1 > 0 ? m - 1 : 1);
        const double det_in = gram_determinant(b);

        const Basis l = lll_reduce(b, p);
        const GsoDecomposition gl = compute_gso(l);
        bool ok = rel_err(gram_determinant(l), det_in) <= 1e-8;
        for (int i = 0; i < m && ok; ++i)
            for (int j = 0; j < i; ++j)
                if (std::abs(gl.mu.at(i, j)) > 0.5 + 1e-9) ok = false;
        for (int k = 1; k < m && ok; ++k) {
            const double mu = gl.mu.at(k, k - 1);
            if (gl.norms_sq[static_cast<size_t>(k)] <
                (p.delta - mu * mu) * gl.norms_sq[static_cast<size_t>(k - 1)] * (1.0 - 1e-9))
                ok = false;
        }

        const Basis z = bkz_reduce(b, p);
        const GsoDecomposition gz = compute_gso(z);
        if (rel_err(gram_determinant(z), det_in) > 1e-8) ok = false;
        for (int i = 0; i + 1 < m && ok; ++i) {
            const int e = std::min(i + p.beta, m);
            const double lambda = svp_enumerate(project_block(z, i, e)).norm_sq;
            if (rel_err(gz.norms_sq[static_cast<size_t>(i)], lambda) > 1e-6) ok = false;
        }
        if (!ok) ++bad;
    }
    return {bad == 0, std::to_string(bad) + " of 1000 bases failed a post-condition"};
}

Verdict svp_oracle() {
    Rng rng(40404);
    int done = 0, bad = 0;
    while (done < 300) {
        const int m = 2 + static_cast<int>(rng.uniform_int(0, 3));  // 2..5
        const Basis b = random_int_basis(rng, m, -9, 9);
        const auto [val, count] = oracle::svp_by_box(b, 2000000);
        (void)count;
        if (val < 0.0) continue;
        ++done;
        if (rel_err(svp_enumerate(b).norm_sq, val) > 1e-9) ++bad;
    }
    return {bad == 0, std::to_string(bad) + " of 300 instances mismatched the box oracle"};
}

Verdict detector_oracle() {
    Rng rng(50505);
    const Constellation c = make_qam(4);
    int done = 0, bad = 0;
    while (done < 200) {
        const int n_tx = done % 2 == 0 ? 2 : 4;
        try {
            const ComplexChannel ch = sample_channel(n_tx, n_tx, rng);
            const std::vector<cplx> sent = pick_symbols(c, n_tx, rng);
            const double sigma = snr_to_sigma(6.0, n_tx, c);
            const std::vector<cplx> y = add_awgn(channel_apply(ch, sent), sigma, rng);
            const DetectionResult a = detect_ml_exhaustive(y, ch, c);
            const DetectionResult b = detect_ml_sphere(y, ch, c);
            ++done;
            if (a.symbols != b.symbols) ++bad;
        } catch (const RankDeficientError&) {
        }
    }
    return {bad == 0, std::to_string(bad) + " of 200 instances differed from exhaustive ml"};
}

Verdict zero_noise() {
    Rng rng(60606);
    int done = 0, bad = 0;
    while (done < 100) {
        const int n_tx = 1 + static_cast<int>(rng.uniform_int(0, 2));
        const int n_rx = n_tx + static_cast<int>(rng.uniform_int(0, 1));
        const Constellation c = make_qam(done % 2 == 0 ? 4 : 16);
        try {
            const ComplexChannel ch = sample_channel(n_rx, n_tx, rng);
            const std::vector<cplx> sent = pick_symbols(c, n_tx, rng);
            const std::vector<cplx> y = channel_apply(ch, sent);
            ReductionParams p;
            p.beta = 2;
            bool ok = detect_ml_exhaustive(y, ch, c).symbols == sent &&
                      detect_ml_sphere(y, ch, c).symbols == sent &&
                      detect_zf(y, ch, c).symbols == sent &&
                      detect_mmse(y, ch, c, 0.0).symbols == sent &&
                      detect_sic(y, ch, c).symbols == sent &&
                      detect_lra_sic(y, ch, c).symbols == sent &&
                      detect_lra_sic(y, ch, c, p, ReductionMethod::bkz).symbols == sent &&
                      detect_lra_sic(y, ch, c, p, ReductionMethod::kz).symbols == sent;
            ++done;
            if (!ok) ++bad;
        } catch (const RankDeficientError&) {
        }
    }
    return {bad == 0, std::to_string(bad) + " of 100 noise-free instances missed"};
}

Verdict ber_ordering() {
    BerConfig cfg;
    cfg.n_tx = 4;
    cfg.n_rx = 4;
    cfg.constellation = 4;
    cfg.snr_db = {20.0};
    cfg.trials = 10000;
    cfg.master_seed = 20240101;
    cfg.detectors = {"ml", "lra-bkz-sic", "sic"};
    cfg.beta = 4;
    cfg.threads = 4;
    const std::vector<BerCurve> curves = run_ber(cfg);
    const long long ml = curves[0].points[0].vec_errors;
    const long long lra = curves[1].points[0].vec_errors;
    const long long sic = curves[2].points[0].vec_errors;
    const auto iv = [&](long long e) { return wilson_interval(e, cfg.trials); };
    // fail only when a pair is disjoint in the wrong order
    const bool ok = !(iv(ml).first > iv(lra).second) && !(iv(lra).first > iv(sic).second) &&
                    !(iv(ml).first > iv(sic).second);
    char buf[128];
    std::snprintf(buf, sizeof buf, "vec errors / 10000: ml=%lld lra-bkz-sic=%lld sic=%lld", ml,
                  lra, sic);
    return {ok, buf};
}

Verdict hermite_table() {
    const long long table[9][3] = {{1, 1, 1},  {2, 4, 3},  {3, 2, 1},   {4, 4, 1}, {5, 8, 1},
                                   {6, 64, 3}, {7, 64, 1}, {8, 256, 1}, {24, 1LL << 48, 1}};
    bool ok = true;
    for (const auto& row : table) {
        const HermiteValue h = hermite_constant(static_cast<int>(row[0]));
        if (!h.has_power_form() || h.power_num != row[1] || h.power_den != row[2]) ok = false;
        const double ratio = static_cast<double>(row[1]) / static_cast<double>(row[2]);
        if (rel_err(std::pow(h.value, static_cast<double>(row[0])), ratio) > 1e-12) ok = false;
    }

    const Basis hex = make_basis({{2.0, 0.0}, {1.0, std::sqrt(3.0)}});
    const double g2 = svp_enumerate(hex).norm_sq / std::sqrt(gram_determinant(hex));
    if (rel_err(hermite_constant(2).value, g2) > 1e-9) ok = false;

    const double h = 0.5;
    const Basis e8 = make_basis({{2, 0, 0, 0, 0, 0, 0, 0},
                                 {-1, 1, 0, 0, 0, 0, 0, 0},
                                 {0, -1, 1, 0, 0, 0, 0, 0},
                                 {0, 0, -1, 1, 0, 0, 0, 0},
                                 {0, 0, 0, -1, 1, 0, 0, 0},
                                 {0, 0, 0, 0, -1, 1, 0, 0},
                                 {0, 0, 0, 0, 0, -1, 1, 0},
                                 {h, h, h, h, h, h, h, h}});
    const double g8 =
        svp_enumerate(e8).norm_sq / std::pow(gram_determinant(e8), 1.0 / 8.0);
    if (rel_err(hermite_constant(8).value, g8) > 1e-9) ok = false;

    char buf[128];
    std::snprintf(buf, sizeof buf, "gamma_2 witness %.12g, gamma_8 witness %.12g", g2, g8);
    return {ok, buf};
}

Verdict determinism() {
    ProximityConfig pc;
    pc.m = 3;
    pc.beta = 2;
    pc.trials = 200;
    pc.ensemble = Ensemble::integer;
    pc.master_seed = 777;
    std::ostringstream p1, p2, p3;
    write_proximity_csv(p1, run_proximity(pc));
    write_proximity_csv(p2, run_proximity(pc));
    pc.threads = 4;
    write_proximity_csv(p3, run_proximity(pc));

    BerConfig bc;
    bc.n_tx = 2;
    bc.n_rx = 2;
    bc.constellation = 4;
    bc.snr_db = {10.0, std::numeric_limits<double>::infinity()};
    bc.trials = 200;
    bc.master_seed = 888;
    bc.detectors = {"zf", "sic", "lra-lll-sic"};
    bc.beta = 2;
    std::ostringstream b1, b2, b3;
    write_ber_csv(b1, run_ber(bc), bc);
    write_ber_csv(b2, run_ber(bc), bc);
    bc.threads = 3;
    write_ber_csv(b3, run_ber(bc), bc);

    const bool ok = p1.str() == p2.str() && p1.str() == p3.str() && b1.str() == b2.str() &&
                    b1.str() == b3.str();
    return {ok, ok ? "proximity and ber reruns byte-identical across thread counts"
                   : "rerun output differed"};
}

}  // namespace

int main() {
    criterion(1, "closed-form bound values", closed_form_bound);
    criterion(2, "empirical ratios below the bound for 2 <= beta <= m <= 6", empirical_bound);
    criterion(3, "reduction post-conditions on 1000 random bases", reduction_correctness);
    criterion(4, "enumeration matches box brute force on 300 instances", svp_oracle);
    criterion(5, "sphere equals exhaustive ml on 200 instances", detector_oracle);
    criterion(6, "all detectors exact on 100 noise-free instances", zero_noise);
    criterion(7, "vector error ordering ml <= lra-bkz-sic <= sic", ber_ordering);
    criterion(8, "hermite table with hexagonal and rank-8 witnesses", hermite_table);
    criterion(9, "byte-identical csv on rerun", determinism);
    std::printf("%d of 9 criteria passed\n", 9 - failures);
    return failures == 0 ? 0 : 1;
}
