#include "CLI11.hpp"

#include "rha/combinatorics.hpp"
#include "rha/config.hpp"
#include "rha/errors.hpp"
#include "rha/estimators.hpp"
#include "rha/experiments.hpp"
#include "rha/io.hpp"
#include "rha/strstats.hpp"

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

namespace {

using namespace rha;

double parse_budget_token(const std::string& tok) {
    if (tok.find('^') != std::string::npos)
        return static_cast<double>(parse_u64_token(tok));
    size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw config_error("bad budget '" + tok + "'");
    }
    if (pos != tok.size() || !(v > 0))
        throw config_error("bad budget '" + tok + "'");
    return v;
}

std::string join_path(const std::string& dir, const std::string& name) {
    if (!name.empty() && name.front() == '/') return name;
    if (dir.empty() || dir == ".") return name;
    return dir + "/" + name;
}

std::string join_symbols(const std::vector<symbol>& key) {
    std::string out;
    for (size_t i = 0; i < key.size(); ++i) {
        if (i) out += '-';
        out += std::to_string(key[i]);
    }
    return out;
}

std::pair<uint64_t, uint64_t> window_range(const std::string& lo,
                                           const std::string& hi, int n) {
    if (n < 0 || n > 62) throw config_error("--n out of range");
    uint64_t block = uint64_t{1} << n;
    uint64_t ilo = lo.empty() ? block : parse_u64_token(lo);
    // default reaches 2^{n+1} so at least one congruent pair gets compared
    uint64_t ihi = hi.empty() ? 2 * block : parse_u64_token(hi);
    return {ilo, ihi};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sampling and analysis toolkit for random hierarchical "
                 "association processes"};
    app.require_subcommand(1);

    std::string config_path, schedule_raw, seed_raw, out_raw, jobs_raw,
        format_raw, plog_raw, mgrid_raw, reps_raw;
    std::vector<std::string> set_raw;

    auto* config_opt =
        app.add_option("--config", config_path, "key=value config file, applied "
                                                "before command-line overrides");
    auto* schedule_opt = app.add_option(
        "--schedule", schedule_raw,
        "hilberg(beta=,n_max=) | explicit([k0,k1,..]) | constant(k=,n_max=) | "
        "squaring(k0=,n_max=)");
    auto* seed_opt =
        app.add_option("--seed", seed_raw, "RNG seed, u64 (2^k form accepted)");
    auto* out_opt = app.add_option("--out", out_raw, "output directory");
    auto* jobs_opt = app.add_option(
        "--jobs", jobs_raw, "accepted for config compatibility; runs serial");
    auto* format_opt =
        app.add_option("--format", format_raw, "output format (csv)");
    auto* plog_opt = app.add_option("--prefix-log2", plog_raw,
                                    "sample a prefix of length 2^p");
    auto* mgrid_opt = app.add_option(
        "--m-grid", mgrid_raw, "comma-separated ascending window/prefix grid");
    auto* reps_opt =
        app.add_option("--reps", reps_raw, "Monte Carlo repetitions");
    app.add_option("--set", set_raw,
                   "extra KEY=VALUE override, repeatable (e.g. --set length=2^20)");

    auto assemble = [&]() {
        RunConfig cfg;
        if (config_opt->count()) cfg = load_config(config_path);
        if (schedule_opt->count()) apply_override(cfg, "schedule", schedule_raw);
        if (seed_opt->count()) apply_override(cfg, "seed", seed_raw);
        if (out_opt->count()) apply_override(cfg, "out", out_raw);
        if (jobs_opt->count()) apply_override(cfg, "jobs", jobs_raw);
        if (format_opt->count()) apply_override(cfg, "format", format_raw);
        if (plog_opt->count()) apply_override(cfg, "prefix_log2", plog_raw);
        if (mgrid_opt->count()) apply_override(cfg, "m_grid", mgrid_raw);
        if (reps_opt->count()) apply_override(cfg, "repetitions", reps_raw);
        for (const std::string& kv : set_raw) {
            size_t eq = kv.find('=');
            if (eq == std::string::npos || eq == 0)
                throw config_error("--set expects KEY=VALUE, got '" + kv + "'");
            apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (cfg.jobs > 1)
            std::cerr << "note: --jobs > 1 accepted; execution is serial\n";
        return cfg;
    };

    // ---- gen ----
    auto* gen = app.add_subcommand(
        "gen", "sample a prefix, write sequence.sym16 + MANIFEST.txt");
    gen->fallthrough();
    std::string gen_length;
    auto* gen_len_opt = gen->add_option(
        "--length", gen_length, "prefix length (alternative to --prefix-log2)");
    gen->callback([&] {
        RunConfig cfg = assemble();
        if (gen_len_opt->count()) apply_override(cfg, "length", gen_length);
        GenResult res = run_generate(cfg);
        std::cout << "sequence " << res.sequence_path << "\n"
                  << "manifest " << res.manifest_path << "\n"
                  << "collision_budget " << format_g12(res.collision_budget)
                  << "\n";
    });

    // ---- stats ----
    auto* stats = app.add_subcommand(
        "stats",
        "subword counts, maximal repetition, LZ78 parse of a stored sequence");
    stats->fallthrough();
    std::string stats_in, stats_maxm, stats_outfile;
    stats->add_option("--in", stats_in, "sequence file (.sym16 or text)")
        ->required();
    auto* maxm_opt = stats->add_option(
        "--max-m", stats_maxm, "largest window length (default min(2^14, n))");
    stats->add_option("--out-file", stats_outfile,
                      "CSV name (default stats.csv)");
    stats->callback([&] {
        RunConfig cfg = assemble();
        SymbolSequence seq = read_sequence(stats_in);
        size_t n = seq.size();
        if (n == 0) throw config_error("empty sequence");
        size_t m_max = std::min<size_t>(n, size_t{1} << 14);
        if (maxm_opt->count()) m_max = parse_u64_token(stats_maxm);

        SuffixStructure st = build_suffix_structure(seq.symbols);
        SubwordProfile prof = subword_profile(st, n, m_max);
        uint64_t L = maximal_repetition(st);
        LZ78Parse lz = lz78_parse(seq.symbols, seq.alphabet_size);

        ensure_dir(cfg.out_dir);
        std::string path = join_path(
            cfg.out_dir, stats_outfile.empty() ? "stats.csv" : stats_outfile);
        CsvWriter w(path, {"stat", "m", "value"});
        for (size_t m = 1; m <= m_max; ++m)
            w.row({"count", std::to_string(m), std::to_string(prof.count(m))});
        for (size_t m = 1; m <= m_max; ++m)
            w.row({"h_top_nats", std::to_string(m), format_g12(prof.h_top(m))});
        for (size_t m = 1; m <= m_max; ++m) {
            DualityCheck d = check_duality(prof.count(m), L, n, m);
            w.row({"duality_ok", std::to_string(m), d.consistent ? "1" : "0"});
        }
        w.row({"n", "", std::to_string(n)});
        w.row({"alphabet", "", std::to_string(seq.alphabet_size)});
        w.row({"L", "", std::to_string(L)});
        w.row({"V", "", std::to_string(lz.phrase_count)});
        w.row({"lz_bits", "", std::to_string(lz.encoded_length_bits)});
        w.row({"lz_vlnv_nats", "", format_g12(lz.code_length_bound)});
        w.row({"max_phrase", "", std::to_string(lz.max_phrase_length)});
        w.close();
        std::cout << "n " << n << "\nL " << L << "\nV " << lz.phrase_count
                  << "\nlz_bits " << lz.encoded_length_bits << "\ncsv " << path
                  << "\n";
    });

    // ---- bounds ----
    auto* bounds = app.add_subcommand(
        "bounds", "two-part block-entropy bounds per level, plus the rate "
                  "sandwich");
    bounds->fallthrough();
    int b_nlo = 1, b_nhi = -1;
    std::string b_outfile;
    bounds->add_option("--n-lo", b_nlo, "first level (default 1)");
    bounds->add_option("--n-hi", b_nhi, "last level (default min(n_max, 24))");
    bounds->add_option("--out-file", b_outfile,
                       "CSV name (default bounds.csv)");
    bounds->callback([&] {
        RunConfig cfg = assemble();
        Schedule s = cfg.schedule();
        int hi = b_nhi >= 0 ? b_nhi : std::min(s.n_max, 24);
        if (b_nlo < 1 || hi < b_nlo || hi > s.n_max)
            throw config_error("need 1 <= n-lo <= n-hi <= n_max");
        ensure_dir(cfg.out_dir);
        std::string path = join_path(
            cfg.out_dir, b_outfile.empty() ? "bounds.csv" : b_outfile);
        write_bounds_csv(s, b_nlo, hi, path);
        Sandwich sw = entropy_rate_sandwich(s);
        std::cout << "rate_sandwich lower " << format_g12(sw.lower) << " upper "
                  << format_g12(sw.upper)
                  << (sw.analytic_zero ? " analytic_zero" : "") << "\n"
                  << "csv " << path << "\n";
    });

    // ---- oracle ----
    auto* oracle = app.add_subcommand(
        "oracle", "exhaustive-enumeration ground truths (small schedules)");
    oracle->fallthrough();
    std::string o_quantity, o_j = "1", o_ilo, o_ihi, o_budget = "1e7",
                            o_outfile;
    int o_n = -1, o_m = -1;
    oracle
        ->add_option("--quantity", o_quantity,
                     "kpair | no_repeat | entropy | stationary | periodicity")
        ->required()
        ->check(CLI::IsMember(
            {"kpair", "no_repeat", "entropy", "stationary", "periodicity"}));
    oracle->add_option("--n", o_n, "grammar level")->required();
    oracle->add_option("--m", o_m, "window length / sub-block level");
    oracle->add_option("--j", o_j, "pair position (kpair; default 1)");
    oracle->add_option("--i-lo", o_ilo,
                       "first 1-based position (periodicity; default 2^n)");
    oracle->add_option("--i-hi", o_ihi,
                       "last position (periodicity; default 2^(n+1))");
    oracle->add_option("--budget", o_budget,
                       "enumeration budget (default 1e7)");
    oracle->add_option("--out-file", o_outfile,
                       "CSV name (default oracle.csv)");
    oracle->callback([&] {
        RunConfig cfg = assemble();
        Schedule s = cfg.schedule();
        double budget = parse_budget_token(o_budget);
        ensure_dir(cfg.out_dir);
        std::string path = join_path(
            cfg.out_dir, o_outfile.empty() ? "oracle.csv" : o_outfile);
        CsvWriter w(path,
                    {"quantity", "n", "m", "j", "budget", "key", "value",
                     "band"});
        std::string ns = std::to_string(o_n);
        std::string ms = o_m >= 0 ? std::to_string(o_m) : "";
        std::string bs = format_g12(budget);
        auto need_m = [&] {
            if (o_m < 0) throw config_error("--m required for " + o_quantity);
        };
        if (o_quantity == "kpair") {
            uint64_t j = parse_u64_token(o_j);
            TvResult tv = kpair_uniformity_oracle(s, o_n, j, budget);
            w.row({"kpair_tv", ns, "", o_j, bs, "", format_g12(tv.tv), "0"});
            w.row({"kpair_cells", ns, "", o_j, bs, "",
                   std::to_string(tv.cells), ""});
            std::cout << "kpair_tv " << format_g12(tv.tv) << " cells "
                      << tv.cells << "\n";
        } else if (o_quantity == "no_repeat") {
            need_m();
            double p = no_repeat_oracle(s, o_n, o_m, budget);
            w.row({"no_repeat_p", ns, ms, "", bs, "", format_g12(p), "0"});
            std::cout << "no_repeat_p " << format_g12(p) << "\n";
        } else if (o_quantity == "entropy") {
            double h = block_entropy_oracle(s, o_n, budget);
            w.row({"entropy_nats", ns, "", "", bs, "", format_g12(h), "0"});
            std::cout << "entropy_nats " << format_g12(h) << "\n";
        } else if (o_quantity == "stationary") {
            need_m();
            auto law = stationary_oracle(s, o_m, o_n, budget);
            for (const auto& [key, p] : law)
                w.row({"stationary_p", ns, ms, "", bs, join_symbols(key),
                       format_g12(p), "0"});
            std::cout << "stationary_support " << law.size() << "\n";
        } else {
            need_m();
            auto range = window_range(o_ilo, o_ihi, o_n);
            PeriodicityResult pr =
                periodicity_check_oracle(s, o_m, o_n, range, budget);
            w.row({"periodicity_max_discrepancy", ns, ms, "", bs, "",
                   format_g12(pr.max_discrepancy), format_g12(pr.band)});
            std::cout << "periodicity_max_discrepancy "
                      << format_g12(pr.max_discrepancy) << "\n";
        }
        w.close();
        std::cout << "csv " << path << "\n";
    });

    // ---- mc ----
    auto* mc = app.add_subcommand(
        "mc", "Monte Carlo estimates paired with the oracle quantities");
    mc->fallthrough();
    std::string m_quantity, m_j = "1", m_ilo, m_ihi, m_outfile;
    int m_n = -1, m_m = -1;
    mc->add_option("--quantity", m_quantity,
                   "plugin | kpair | no_repeat | stationary | periodicity")
        ->required()
        ->check(CLI::IsMember(
            {"plugin", "kpair", "no_repeat", "stationary", "periodicity"}));
    mc->add_option("--n", m_n, "grammar level")->required();
    mc->add_option("--m", m_m, "window length / sub-block level");
    mc->add_option("--j", m_j, "pair position (kpair; default 1)");
    mc->add_option("--i-lo", m_ilo,
                   "first 1-based position (periodicity; default 2^n)");
    mc->add_option("--i-hi", m_ihi,
                   "last position (periodicity; default 2^(n+1))");
    mc->add_option("--out-file", m_outfile, "CSV name (default mc.csv)");
    mc->callback([&] {
        RunConfig cfg = assemble();
        Schedule s = cfg.schedule();
        if (cfg.repetitions == 0)
            throw config_error("--reps required for mc");
        uint64_t R = cfg.repetitions;
        ensure_dir(cfg.out_dir);
        std::string path =
            join_path(cfg.out_dir, m_outfile.empty() ? "mc.csv" : m_outfile);
        CsvWriter w(path,
                    {"quantity", "n", "m", "j", "reps", "key", "value",
                     "band"});
        std::string ns = std::to_string(m_n);
        std::string ms = m_m >= 0 ? std::to_string(m_m) : "";
        std::string rs = std::to_string(R);
        auto need_m = [&] {
            if (m_m < 0) throw config_error("--m required for " + m_quantity);
        };
        if (m_quantity == "plugin") {
            PluginEntropy pe = plugin_block_entropy(s, m_n, R, cfg.seed);
            w.row({"plugin_h_hat", ns, "", "", rs, "", format_g12(pe.h_hat),
                   ""});
            w.row({"plugin_miller_madow", ns, "", "", rs, "",
                   format_g12(pe.miller_madow), ""});
            w.row({"plugin_support", ns, "", "", rs, "",
                   std::to_string(pe.support), ""});
            std::cout << "plugin_h_hat " << format_g12(pe.h_hat)
                      << " miller_madow " << format_g12(pe.miller_madow)
                      << "\n";
        } else if (m_quantity == "kpair") {
            uint64_t j = parse_u64_token(m_j);
            TvResult tv = kpair_uniformity_mc(s, m_n, j, R, cfg.seed);
            w.row({"kpair_tv", ns, "", m_j, rs, "", format_g12(tv.tv),
                   format_g12(tv.band)});
            w.row({"kpair_cells", ns, "", m_j, rs, "",
                   std::to_string(tv.cells), ""});
            std::cout << "kpair_tv " << format_g12(tv.tv) << " band "
                      << format_g12(tv.band) << "\n";
        } else if (m_quantity == "no_repeat") {
            need_m();
            double p = no_repeat_mc(s, m_n, m_m, R, cfg.seed);
            w.row({"no_repeat_p_hat", ns, ms, "", rs, "", format_g12(p), ""});
            std::cout << "no_repeat_p_hat " << format_g12(p) << "\n";
        } else if (m_quantity == "stationary") {
            need_m();
            EmpiricalDistribution emp =
                stationary_mean_block(s, m_m, m_n, R, cfg.seed);
            for (const auto& [key, c] : emp.counts)
                w.row({"stationary_p_hat", ns, ms, "", rs, join_symbols(key),
                       format_g12(static_cast<double>(c) /
                                  static_cast<double>(emp.total)),
                       ""});
            std::cout << "stationary_support " << emp.counts.size()
                      << " total " << emp.total << "\n";
        } else {
            need_m();
            auto range = window_range(m_ilo, m_ihi, m_n);
            PeriodicityResult pr =
                periodicity_check_mc(s, m_m, m_n, range, R, cfg.seed);
            w.row({"periodicity_max_discrepancy", ns, ms, "", rs, "",
                   format_g12(pr.max_discrepancy), format_g12(pr.band)});
            std::cout << "periodicity_max_discrepancy "
                      << format_g12(pr.max_discrepancy) << " band "
                      << format_g12(pr.band) << "\n";
        }
        w.close();
        std::cout << "csv " << path << "\n";
    });

    // ---- experiment ----
    auto* exper = app.add_subcommand("experiment", "scaling studies");
    exper->fallthrough();
    std::string e_kind;
    exper->add_option("--kind", e_kind, "hilberg | lz_ratio")
        ->required()
        ->check(CLI::IsMember({"hilberg", "lz_ratio"}));
    exper->callback([&] {
        RunConfig cfg = assemble();
        std::vector<std::string> files = e_kind == "hilberg"
                                             ? run_hilberg_experiment(cfg)
                                             : run_lz_ratio_experiment(cfg);
        for (const std::string& f : files) std::cout << f << "\n";
        std::cout << "out_dir " << cfg.out_dir << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const budget_error& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const invariant_error& e) {
        std::cerr << "invariant violated: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
