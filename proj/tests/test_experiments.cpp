#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>

#include "latred/experiments.hpp"

using namespace latred;

TEST_CASE("wilson intervals") {
    {
        const auto [lo, hi] = wilson_interval(0, 100);
        CHECK(lo == 0.0);
        CHECK(hi > 0.0);
        CHECK(hi < 0.05);
    }
    {
        const auto [lo, hi] = wilson_interval(100, 100);
        CHECK(hi == 1.0);
        CHECK(lo > 0.95);
    }
    {
        const auto [lo, hi] = wilson_interval(5, 100);
        CHECK_THAT(lo, Catch::Matchers::WithinAbs(0.021543, 2e-4));
        CHECK_THAT(hi, Catch::Matchers::WithinAbs(0.111752, 2e-4));
        CHECK(lo < 0.05);
        CHECK(hi > 0.05);
        CHECK_THAT(wilson_halfwidth(5, 100),
                   Catch::Matchers::WithinRel((hi - lo) / 2.0, 1e-15));
    }
}

TEST_CASE("ensemble names round trip") {
    for (Ensemble e : {Ensemble::gaussian, Ensemble::integer, Ensemble::identity})
        CHECK(parse_ensemble(to_string(e)) == e);
    CHECK_THROWS_AS(parse_ensemble("cauchy"), ConfigError);
}

TEST_CASE("proximity experiment stays under the bound on gaussian channels") {
    ProximityConfig cfg;
    cfg.m = 2;
    cfg.beta = 2;
    cfg.trials = 1000;
    cfg.ensemble = Ensemble::gaussian;
    cfg.master_seed = 9001;
    const ProximityReport rep = run_proximity(cfg);
    CHECK(rep.violations.empty());
    REQUIRE(rep.per_index_sup.size() == 2);
    CHECK(rep.per_index_sup[0] > 0.0);
    CHECK(rep.per_index_sup[0] <= rep.bound.per_index[0] * (1.0 + tol::identity));
    CHECK(rep.per_index_sup[1] <= rep.bound.per_index[1] * (1.0 + tol::identity));
    CHECK_THAT(rep.bound.value, Catch::Matchers::WithinRel(20.0 / 9.0, 1e-12));
}

TEST_CASE("orthogonal ensemble never exceeds ratio 1") {
    ProximityConfig cfg;
    cfg.m = 4;
    cfg.beta = 2;
    cfg.trials = 50;
    cfg.ensemble = Ensemble::identity;
    cfg.master_seed = 1;
    const ProximityReport rep = run_proximity(cfg);
    CHECK(rep.violations.empty());
    for (double s : rep.per_index_sup) CHECK(s == 1.0);
}

TEST_CASE("proximity runs are deterministic and thread-invariant") {
    ProximityConfig cfg;
    cfg.m = 3;
    cfg.beta = 2;
    cfg.trials = 60;
    cfg.ensemble = Ensemble::integer;
    cfg.master_seed = 77;
    const ProximityReport a = run_proximity(cfg);
    const ProximityReport b = run_proximity(cfg);
    cfg.threads = 4;
    const ProximityReport c = run_proximity(cfg);
    CHECK(a.per_index_sup == b.per_index_sup);
    CHECK(a.per_index_sup == c.per_index_sup);
    CHECK(a.violations.size() == c.violations.size());

    std::ostringstream s1, s2;
    write_proximity_csv(s1, a);
    write_proximity_csv(s2, c);
    CHECK(s1.str() == s2.str());
    CHECK(s1.str().find("# proximity experiment") == 0);
    CHECK(s1.str().find("m,beta,ensemble,trials,i,empirical_sup,per_index_bound,theorem_bound,"
                        "violated") != std::string::npos);
    CHECK(s1.str().find("master_seed=77") != std::string::npos);
}

TEST_CASE("empirical sup by block size is recorded") {
    double sups[3] = {0, 0, 0};
    for (int beta = 2; beta <= 4; ++beta) {
        ProximityConfig cfg;
        cfg.m = 4;
        cfg.beta = beta;
        cfg.trials = 120;
        cfg.ensemble = Ensemble::gaussian;
        cfg.master_seed = 4242;
        const ProximityReport rep = run_proximity(cfg);
        CHECK(rep.violations.empty());
        double worst = 0.0;
        for (double s : rep.per_index_sup) worst = std::max(worst, s);
        sups[beta - 2] = worst;
    }
    if (!(sups[1] <= sups[0] * (1.0 + 1e-6) && sups[2] <= sups[1] * (1.0 + 1e-6)))
        WARN("empirical sup not monotone in beta: " << sups[0] << " " << sups[1] << " "
                                                    << sups[2]);
}

TEST_CASE("proximity guards") {
    ProximityConfig cfg;
    cfg.m = 9;
    cfg.beta = 2;
    CHECK_THROWS_AS(run_proximity(cfg), GuardError);
    cfg.m = 4;
    cfg.trials = 0;
    CHECK_THROWS_AS(run_proximity(cfg), ConfigError);
    cfg.trials = 1;
    cfg.beta = 5;
    CHECK_THROWS_AS(run_proximity(cfg), Error);
}

TEST_CASE("inequality audit is clean on identity and random ensembles") {
    {
        SchnorrAuditConfig cfg;
        cfg.m = 4;
        cfg.beta = 2;
        cfg.trials = 50;
        cfg.ensemble = Ensemble::identity;
        cfg.master_seed = 3;
        const SchnorrAudit audit = run_schnorr_audit(cfg);
        CHECK(audit.checked == 50);
        CHECK(audit.violations == 0);
        CHECK(audit.violating.empty());
        CHECK(audit.worst_margin == 0.0);
        CHECK(audit.worst_index == 1);
    }
    {
        SchnorrAuditConfig cfg;
        cfg.m = 4;
        cfg.beta = 2;
        cfg.trials = 100;
        cfg.ensemble = Ensemble::integer;
        cfg.master_seed = 1234;
        cfg.threads = 2;
        const SchnorrAudit audit = run_schnorr_audit(cfg);
        CHECK(audit.checked == 100);
        CHECK(audit.violations == 0);
        CHECK(audit.worst_margin >= -tol::identity);
        CHECK(audit.worst_trial >= 0);
    }
    SchnorrAuditConfig bad;
    bad.m = 9;
    CHECK_THROWS_AS(run_schnorr_audit(bad), GuardError);
    bad.m = 4;
    bad.trials = 0;
    CHECK_THROWS_AS(run_schnorr_audit(bad), ConfigError);
}

TEST_CASE("noise-free sweep has error rate exactly zero") {
    BerConfig cfg;
    cfg.n_tx = 2;
    cfg.n_rx = 2;
    cfg.constellation = 4;
    cfg.snr_db = {std::numeric_limits<double>::infinity()};
    cfg.trials = 50;
    cfg.master_seed = 11;
    cfg.detectors = {"ml", "zf", "mmse", "sic", "lra-lll-sic", "lra-bkz-sic", "lra-kz-sic"};
    cfg.beta = 2;
    const std::vector<BerCurve> curves = run_ber(cfg);
    REQUIRE(curves.size() == 7);
    for (const BerCurve& c : curves) {
        REQUIRE(c.points.size() == 1);
        CHECK(c.points[0].trials == 50);
        CHECK(c.points[0].vec_errors == 0);
        CHECK(c.points[0].sym_errors == 0);
        CHECK(c.points[0].ber == 0.0);
        CHECK(c.points[0].ci_halfwidth > 0.0);
    }
}

TEST_CASE("ml is never statistically worse than sic") {
    BerConfig cfg;
    cfg.n_tx = 4;
    cfg.n_rx = 4;
    cfg.constellation = 4;
    cfg.snr_db = {16.0};
    cfg.trials = 1500;
    cfg.master_seed = 2024;
    cfg.detectors = {"ml", "sic"};
    cfg.beta = 4;
    const std::vector<BerCurve> curves = run_ber(cfg);
    REQUIRE(curves.size() == 2);
    const BerPoint& ml = curves[0].points[0];
    const BerPoint& sic = curves[1].points[0];
    CHECK(curves[0].detector == "ml");
    const auto ml_iv = wilson_interval(ml.vec_errors, cfg.trials);
    const auto sic_iv = wilson_interval(sic.vec_errors, cfg.trials);
    // fail only if the intervals are disjoint in the wrong order
    CHECK_FALSE(ml_iv.first > sic_iv.second);
}

TEST_CASE("ber sweeps are deterministic and thread-invariant") {
    BerConfig cfg;
    cfg.n_tx = 2;
    cfg.n_rx = 2;
    cfg.constellation = 16;
    cfg.snr_db = {8.0, 14.0};
    cfg.trials = 300;
    cfg.master_seed = 5150;
    cfg.detectors = {"zf", "mmse", "sic", "lra-lll-sic"};
    cfg.beta = 2;
    const std::vector<BerCurve> a = run_ber(cfg);
    cfg.threads = 3;
    const std::vector<BerCurve> b = run_ber(cfg);
    REQUIRE(a.size() == b.size());
    for (size_t d = 0; d < a.size(); ++d) {
        CHECK(a[d].detector == b[d].detector);
        for (size_t s = 0; s < a[d].points.size(); ++s) {
            CHECK(a[d].points[s].vec_errors == b[d].points[s].vec_errors);
            CHECK(a[d].points[s].sym_errors == b[d].points[s].sym_errors);
        }
    }
    std::ostringstream s1, s2;
    write_ber_csv(s1, a, cfg);
    write_ber_csv(s2, b, cfg);
    CHECK(s1.str() == s2.str());
    CHECK(s1.str().find("detector,snr_db,trials,vec_errors,sym_errors,ber,ci_halfwidth") !=
          std::string::npos);
    CHECK(s1.str().find("snr convention") != std::string::npos);
    CHECK(s1.str().find("quantizer") != std::string::npos);
    CHECK(s1.str().find("master_seed=5150") != std::string::npos);
    CHECK(s1.str().find("delta=") != std::string::npos);
    CHECK(s1.str().find("max_tours=") != std::string::npos);

    // more noise should not help; finite samples only earn a warning
    for (const BerCurve& c : a)
        if (c.points[0].sym_errors < c.points[1].sym_errors)
            WARN("ber not monotone for " << c.detector);
}

TEST_CASE("ber config errors name the offending field") {
    const auto message_of = [](BerConfig c) -> std::string {
        try {
            validate_ber_config(c);
        } catch (const ConfigError& e) {
            return e.what();
        }
        return "";
    };
    BerConfig base;
    base.n_tx = 2;
    base.n_rx = 2;
    base.beta = 2;

    BerConfig c = base;
    c.n_tx = 0;
    CHECK(message_of(c).find("n_tx") != std::string::npos);
    c = base;
    c.n_rx = 1;
    CHECK(message_of(c).find("n_rx") != std::string::npos);
    c = base;
    c.trials = 0;
    CHECK(message_of(c).find("trials") != std::string::npos);
    c = base;
    c.snr_db.clear();
    CHECK(message_of(c).find("snr") != std::string::npos);
    c = base;
    c.detectors.clear();
    CHECK(message_of(c).find("detectors") != std::string::npos);
    c = base;
    c.constellation = 5;
    CHECK(message_of(c).find("constellation") != std::string::npos);
    c = base;
    c.detectors = {"turbo"};
    CHECK(message_of(c).find("turbo") != std::string::npos);
    c = base;
    c.beta = 1;
    CHECK(message_of(c).find("beta") != std::string::npos);
    c = base;
    c.beta = 5;  // 2 n_tx = 4
    CHECK(message_of(c).find("beta") != std::string::npos);
}

TEST_CASE("the ml guard trims oversized codebooks from sweeps") {
    BerConfig cfg;
    cfg.n_tx = 4;
    cfg.n_rx = 4;
    cfg.constellation = 64;
    cfg.snr_db = {30.0};
    cfg.trials = 5;
    cfg.master_seed = 99;
    cfg.detectors = {"ml", "zf"};
    cfg.beta = 2;
    const std::vector<BerCurve> curves = run_ber(cfg);
    REQUIRE(curves.size() == 1);
    CHECK(curves[0].detector == "zf");

    cfg.detectors = {"ml"};
    CHECK_THROWS_AS(run_ber(cfg), ConfigError);
}

TEST_CASE("bound table rows serialize with the per-index list quoted") {
    std::vector<ProximityBound> rows = {proximity_bound_sic(2, 2), proximity_bound_sic(4, 3)};
    std::ostringstream os;
    write_bound_csv(os, rows);
    const std::string s = os.str();
    CHECK(s.find("m,beta,gamma_beta,exactness,bound,per_index_json") == 0);
    CHECK(s.find("exact") != std::string::npos);
    CHECK(s.find(",\"[") != std::string::npos);
    CHECK(s.find("]\"") != std::string::npos);
    CHECK(s.find("2.2222222222222") != std::string::npos);  // 20/9 in the first row
}

TEST_CASE("counterexamples reload bit-exactly") {
    const Basis b = make_basis({{1.5, -2.25}, {0.0625, 3.0}});
    const std::string path = "counterexample_roundtrip.basis";
    save_counterexample(path, b, "m=2 beta=2 trial=17 i=1");
    const Basis r = load_basis(path);
    CHECK(r.gens == b.gens);
    std::remove(path.c_str());
}
