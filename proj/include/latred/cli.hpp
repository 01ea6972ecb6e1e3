#pragma once

// Command-line front end: reduce | bound | proximity | ber.
//
// Exit codes: 0 success, 1 usage/config/parse error, 2 numerical guard
// refusal (rank caps, rank deficiency), 3 proximity bound violation.
// Every run resolves its configuration, prints it to stderr before any
// computation, and embeds it in CSV headers. Seeds are always explicit.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "latred/basis.hpp"
#include "latred/bkz.hpp"
#include "latred/bounds.hpp"
#include "latred/experiments.hpp"
#include "latred/lll.hpp"

namespace latred {

namespace detail {

inline std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw ConfigError("cannot open output file '" + path + "'");
    return file;
}

inline int failure_code(const std::exception& e) {
    if (dynamic_cast<const GuardError*>(&e)) return 2;
    if (dynamic_cast<const RankDeficientError*>(&e)) return 2;
    return 1;
}

// Plain key=value configuration files, routed to the parsed subcommand by
// hand: the parser only consumes config files attached to the root command,
// and these belong to subcommands. Values given on the command line win.
inline void apply_config_file(CLI::App* cmd, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = CLI::detail::trim_copy(line);
        if (text.empty() || text[0] == '#') continue;
        const size_t eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = CLI::detail::trim_copy(text.substr(0, eq));
        const std::string value = CLI::detail::trim_copy(text.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (opt == nullptr)
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" +
                              key + "'");
        if (opt->count() > 0) continue;
        std::istringstream tokens(value);
        std::string tok;
        while (tokens >> tok) opt->add_result(tok);
        opt->run_callback();
    }
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv) {
    CLI::App app{"lattice reduction and reduction-aided detection toolkit"};
    app.require_subcommand(1);

    // reduce ----------------------------------------------------------------
    auto* reduce = app.add_subcommand("reduce", "reduce a basis file");
    std::string red_input, red_output, red_method = "lll";
    double red_delta = 0.99;
    int red_beta = 2, red_tours = 32;
    reduce->add_option("input", red_input, "basis file (first line: m d)")->required();
    reduce->add_option("-o,--output", red_output, "output basis file (default: stdout)");
    reduce->add_option("--method", red_method, "lll | bkz | kz")
        ->check(CLI::IsMember({"lll", "bkz", "kz"}));
    reduce->add_option("--delta", red_delta, "Lovasz parameter");
    reduce->add_option("--beta", red_beta, "BKZ block size");
    reduce->add_option("--max-tours", red_tours, "BKZ tour cap");
    std::string red_config;
    reduce->add_option("--config", red_config, "key=value configuration file");

    // bound -----------------------------------------------------------------
    auto* bound = app.add_subcommand("bound", "print the closed-form bound table");
    int bnd_m = 0, bnd_beta = 0;
    std::string bnd_output;
    bound->add_option("--m", bnd_m, "lattice rank (required)");
    bound->add_option("--beta", bnd_beta, "block size (default: every 2..m)");
    bound->add_option("-o,--output", bnd_output, "output CSV (default: stdout)");
    std::string bnd_config;
    bound->add_option("--config", bnd_config, "key=value configuration file");

    // proximity ---------------------------------------------------------------
    auto* prox = app.add_subcommand("proximity", "empirical proximity ratios vs the bound");
    ProximityConfig pc;
    std::string prox_output, prox_ensemble = "gaussian", prox_archive = ".";
    bool prox_seed_set = false;
    prox->add_option("--m", pc.m, "lattice rank (<= 8)");
    prox->add_option("--beta", pc.beta, "block size");
    prox->add_option("--trials", pc.trials, "number of trials");
    prox->add_option("--ensemble", prox_ensemble, "gaussian | integer | identity")
        ->check(CLI::IsMember({"gaussian", "integer", "identity"}));
    prox->add_option("--master-seed", pc.master_seed, "master seed (required)")
        ->each([&](const std::string&) { prox_seed_set = true; });
    prox->add_option("--delta", pc.delta, "Lovasz parameter");
    prox->add_option("--max-tours", pc.max_tours, "BKZ tour cap");
    prox->add_option("--threads", pc.threads, "worker threads");
    prox->add_option("-o,--output", prox_output, "output CSV (default: stdout)");
    prox->add_option("--archive-dir", prox_archive, "directory for violation bases");
    std::string prox_config;
    prox->add_option("--config", prox_config, "key=value configuration file");

    // ber ---------------------------------------------------------------------
    auto* ber = app.add_subcommand("ber", "Monte-Carlo error-rate sweep");
    BerConfig bc;
    std::string ber_output;
    bool ber_seed_set = false;
    ber->add_option("--n-tx", bc.n_tx, "transmit antennas");
    ber->add_option("--n-rx", bc.n_rx, "receive antennas");
    ber->add_option("--constellation", bc.constellation, "QAM order: 4, 16 or 64");
    ber->add_option("--snr", bc.snr_db, "SNR grid in dB (repeatable)");
    ber->add_option("--trials", bc.trials, "trials per SNR point");
    ber->add_option("--master-seed", bc.master_seed, "master seed (required)")
        ->each([&](const std::string&) { ber_seed_set = true; });
    ber->add_option("--detectors", bc.detectors,
                    "subset of: ml zf mmse sic lra-lll-sic lra-bkz-sic lra-kz-sic");
    ber->add_option("--delta", bc.delta, "Lovasz parameter");
    ber->add_option("--beta", bc.beta, "BKZ block size");
    ber->add_option("--max-tours", bc.max_tours, "BKZ tour cap");
    ber->add_option("--threads", bc.threads, "worker threads");
    ber->add_option("-o,--output", ber_output, "output CSV (default: stdout)");
    std::string ber_config;
    ber->add_option("--config", ber_config, "key=value configuration file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (reduce->parsed()) {
            if (!red_config.empty()) detail::apply_config_file(reduce, red_config);
            ReductionParams params;
            params.delta = red_delta;
            params.beta = red_beta;
            params.max_tours = red_tours;
            std::cerr << "# reduce input=" << red_input << " method=" << red_method
                      << " delta=" << detail::fmt_g17(params.delta) << " beta=" << params.beta
                      << " max_tours=" << params.max_tours << "\n";
            const Basis in = load_basis(red_input);
            ReductionStats stats;
            Basis out;
            if (red_method == "lll") out = lll_reduce(in, params, &stats);
            else if (red_method == "bkz") out = bkz_reduce(in, params, &stats);
            else out = kz_reduce(in, params, &stats);
            std::ofstream file;
            write_basis(detail::open_output(file, red_output), out);
            std::cerr << "b1_norm_sq=" << detail::fmt_g17(norm_sq(out.gens[0]))
                      << " gram_det_sq=" << detail::fmt_g17(gram_determinant(out))
                      << " tours=" << stats.tours << " insertions=" << stats.insertions
                      << " swaps=" << stats.swaps << "\n";
            return 0;
        }

        if (bound->parsed()) {
            if (!bnd_config.empty()) detail::apply_config_file(bound, bnd_config);
            if (bnd_m < 1) throw ConfigError("m must be >= 1, got " + std::to_string(bnd_m));
            std::vector<ProximityBound> rows;
            if (bnd_beta != 0) {
                rows.push_back(proximity_bound_sic(bnd_m, bnd_beta));
            } else if (bnd_m == 1) {
                rows.push_back(proximity_bound_sic(1, 2));
            } else {
                for (int b = 2; b <= bnd_m; ++b) rows.push_back(proximity_bound_sic(bnd_m, b));
            }
            std::cerr << "# bound m=" << bnd_m
                      << " beta=" << (bnd_beta != 0 ? std::to_string(bnd_beta) : "2.." + std::to_string(bnd_m))
                      << "\n";
            std::ofstream file;
            write_bound_csv(detail::open_output(file, bnd_output), rows);
            return 0;
        }

        if (prox->parsed()) {
            if (!prox_config.empty()) detail::apply_config_file(prox, prox_config);
            if (!prox_seed_set) throw ConfigError("master_seed required");
            pc.ensemble = parse_ensemble(prox_ensemble);
            std::cerr << "# proximity m=" << pc.m << " beta=" << pc.beta
                      << " trials=" << pc.trials << " ensemble=" << to_string(pc.ensemble)
                      << " master_seed=" << pc.master_seed
                      << " delta=" << detail::fmt_g17(pc.delta) << " max_tours=" << pc.max_tours
                      << " threads=" << pc.threads << "\n";
            const ProximityReport rep = run_proximity(pc);
            std::ofstream file;
            write_proximity_csv(detail::open_output(file, prox_output), rep);
            if (!rep.violations.empty()) {
                for (const auto& v : rep.violations) {
                    std::ostringstream name;
                    name << prox_archive << "/violation_m" << pc.m << "_beta" << pc.beta
                         << "_trial" << v.trial << "_i" << v.index << ".basis";
                    std::ostringstream comment;
                    comment << "m=" << pc.m << " beta=" << pc.beta
                            << " ensemble=" << to_string(pc.ensemble)
                            << " master_seed=" << pc.master_seed << " trial=" << v.trial
                            << " i=" << v.index << " ratio=" << detail::fmt_g17(v.ratio)
                            << " bound=" << detail::fmt_g17(v.bound);
                    save_counterexample(name.str(), v.basis, comment.str());
                    std::cerr << "violation archived: " << name.str() << "\n";
                }
                return 3;
            }
            return 0;
        }

        if (ber->parsed()) {
            if (!ber_config.empty()) detail::apply_config_file(ber, ber_config);
            if (!ber_seed_set) throw ConfigError("master_seed required");
            std::cerr << "# ber n_tx=" << bc.n_tx << " n_rx=" << bc.n_rx
                      << " constellation=" << bc.constellation << " trials=" << bc.trials
                      << " master_seed=" << bc.master_seed
                      << " delta=" << detail::fmt_g17(bc.delta) << " beta=" << bc.beta
                      << " max_tours=" << bc.max_tours << " threads=" << bc.threads
                      << " detectors=";
            for (size_t i = 0; i < bc.detectors.size(); ++i)
                std::cerr << (i ? "," : "") << bc.detectors[i];
            std::cerr << " snr=";
            for (size_t i = 0; i < bc.snr_db.size(); ++i)
                std::cerr << (i ? "," : "") << detail::fmt_g17(bc.snr_db[i]);
            std::cerr << "\n";
            const std::vector<BerCurve> curves = run_ber(bc);
            for (const auto& d : bc.detectors) {
                bool present = false;
                for (const auto& c : curves) present = present || c.detector == d;
                if (!present)
                    std::cerr << "note: detector '" << d << "' skipped by the codebook guard\n";
            }
            std::ofstream file;
            write_ber_csv(detail::open_output(file, ber_output), curves, bc);
            return 0;
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return detail::failure_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace latred
