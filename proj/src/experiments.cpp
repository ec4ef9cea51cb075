#include "rha/experiments.hpp"

#include "rha/combinatorics.hpp"
#include "rha/errors.hpp"
#include "rha/estimators.hpp"
#include "rha/io.hpp"
#include "rha/strstats.hpp"

#include <algorithm>
#include <cmath>

namespace rha {

namespace {

constexpr double kLn2 = 0.6931471805599453;

size_t prefix_length(const RunConfig& cfg) {
    if (cfg.extra.count("length")) return parse_u64_token(cfg.extra.at("length"));
    if (cfg.prefix_log2 >= 0) return size_t{1} << cfg.prefix_log2;
    throw config_error("need prefix_log2 or length");
}

int floor_log2(uint64_t v) {
    int l = -1;
    while (v) {
        v >>= 1;
        ++l;
    }
    return l;
}

std::string method_name(BoundReport::Method m) {
    return m == BoundReport::Method::exact ? "exact" : "asymptotic";
}

} // namespace

GenResult run_generate(const RunConfig& cfg) {
    Schedule s = cfg.schedule();
    size_t N = prefix_length(cfg);
    size_t max_symbols = cfg.extra_u64("max_symbols", uint64_t{1} << 26);
    ensure_dir(cfg.out_dir);
    GenResult res;
    SymbolSequence seq =
        sample_prefix(s, N, cfg.seed, max_symbols, &res.collision_budget);
    res.sequence_path = cfg.out_dir + "/sequence.sym16";
    write_sym16(res.sequence_path, seq);
    res.manifest_path = write_manifest(
        cfg.out_dir,
        {{"schedule", s.spec_string()},
         {"seed", std::to_string(cfg.seed)},
         {"length", std::to_string(N)},
         {"collision_budget", format_g12(res.collision_budget)},
         {"tool", kToolVersion}},
        {"sequence.sym16"});
    return res;
}

void write_bounds_csv(const Schedule& s, int n_lo, int n_hi,
                      const std::string& path) {
    CsvWriter csv(path, {"n", "lower_nats", "upper_nats", "minimizing_l",
                         "maximizing_l", "p_no_repeat_at_l", "lower_rel_budget",
                         "upper_rel_budget", "lower_method", "upper_method"});
    for (int n = n_lo; n <= n_hi; ++n) {
        BoundReport lo = block_entropy_lower(s, n);
        BoundReport hi = block_entropy_upper(s, n);
        // arg_l = -1 marks a vacuous lower bound (no level contributes)
        std::string pn_cell;
        if (lo.arg_l >= 1)
            pn_cell = format_g12(prob_no_repeat(s, n, lo.arg_l).value.value());
        csv.row({std::to_string(n), format_g12(lo.value.value()),
                 format_g12(hi.value.value()), std::to_string(hi.arg_l),
                 std::to_string(lo.arg_l), pn_cell,
                 format_g12(lo.error_budget), format_g12(hi.error_budget),
                 method_name(lo.method), method_name(hi.method)});
    }
    csv.close();
}

std::vector<std::string> run_hilberg_experiment(const RunConfig& cfg) {
    Schedule s = cfg.schedule();
    size_t N = prefix_length(cfg);
    int n_log = floor_log2(N);
    if ((size_t{1} << n_log) != N)
        throw config_error("hilberg experiment needs a power-of-two prefix");
    int grid_lo = static_cast<int>(cfg.extra_u64("grid_lo_log2", 6));
    if (grid_lo > n_log) throw config_error("grid_lo_log2 exceeds prefix_log2");
    std::vector<uint64_t> m_grid = cfg.m_grid;
    if (m_grid.empty())
        for (int l = 1; l <= std::min(14, n_log - 1); ++l)
            m_grid.push_back(uint64_t{1} << l);
    if (m_grid.empty()) throw config_error("empty m_grid");
    for (uint64_t m : m_grid)
        if (m < 1 || m > N || (m & (m - 1)) != 0)
            throw config_error("m_grid entries must be powers of two within the prefix");

    ensure_dir(cfg.out_dir);
    double collision_budget = 0.0;
    size_t max_symbols = cfg.extra_u64("max_symbols", uint64_t{1} << 26);
    SymbolSequence seq =
        sample_prefix(s, N, cfg.seed, max_symbols, &collision_budget);
    std::vector<std::string> files;

    // distinct-window counts of the full prefix vs the Prop. 4 cap
    SuffixStructure st = build_suffix_structure(seq.symbols);
    SubwordProfile prof = subword_profile(st, N, m_grid.back());
    {
        CsvWriter csv(cfg.out_dir + "/htop.csv",
                      {"m", "count", "h_top_nats", "cap_nats"});
        for (uint64_t m : m_grid) {
            int lvl = floor_log2(m);
            csv.row({std::to_string(m), std::to_string(prof.count(m)),
                     format_g12(prof.h_top(m)),
                     format_g12(top_entropy_cap(s, lvl))});
        }
        csv.close();
        files.push_back("htop.csv");
    }

    // L and LZ78 along the doubling prefix grid
    std::vector<std::pair<double, double>> l_points;
    {
        CsvWriter lcsv(cfg.out_dir + "/L_growth.csv", {"prefix_m", "L"});
        CsvWriter zcsv(cfg.out_dir + "/lz.csv",
                       {"prefix_m", "V", "encoded_bits", "vlnv_nats"});
        for (int j = grid_lo; j <= n_log; ++j) {
            size_t mlen = size_t{1} << j;
            std::vector<symbol> head(seq.symbols.begin(),
                                     seq.symbols.begin() + mlen);
            uint64_t L = maximal_repetition(head);
            LZ78Parse z = lz78_parse(head, s.alphabet());
            lcsv.row({std::to_string(mlen), std::to_string(L)});
            zcsv.row({std::to_string(mlen), std::to_string(z.phrase_count),
                      std::to_string(z.encoded_length_bits),
                      format_g12(z.code_length_bound)});
            if (L >= 1 && mlen > 1)
                l_points.emplace_back(static_cast<double>(mlen),
                                      static_cast<double>(L));
        }
        lcsv.close();
        zcsv.close();
        files.push_back("L_growth.csv");
        files.push_back("lz.csv");
    }

    {
        int n_hi = std::min(s.n_max, 24);
        write_bounds_csv(s, std::min(8, n_hi), n_hi, cfg.out_dir + "/bounds.csv");
        files.push_back("bounds.csv");
    }

    // fits: power law on h_top(m) vs m, hyperlog on L vs prefix length
    {
        uint64_t fit_lo = cfg.extra_u64("fit_lo_log2", 6);
        uint64_t fit_hi = cfg.extra_u64("fit_hi_log2",
                                        static_cast<uint64_t>(n_log) / 2);
        CsvWriter csv(cfg.out_dir + "/fits.csv",
                      {"model", "exponent_hat", "intercept", "r2", "x_lo",
                       "x_hi", "n_points"});
        std::vector<std::pair<double, double>> h_points;
        for (uint64_t m : m_grid) {
            int lvl = floor_log2(m);
            if (lvl >= static_cast<int>(fit_lo) && lvl <= static_cast<int>(fit_hi))
                h_points.emplace_back(static_cast<double>(m), prof.h_top(m));
        }
        if (h_points.size() >= 4) {
            ScalingFit f = fit_exponent(h_points, FitModel::power_law);
            csv.row({"power_law", format_g12(f.exponent_hat),
                     format_g12(f.intercept), format_g12(f.r2),
                     format_g12(f.fit_range.first), format_g12(f.fit_range.second),
                     std::to_string(f.n_points)});
        }
        if (l_points.size() >= 4) {
            ScalingFit f = fit_exponent(l_points, FitModel::hyperlog);
            csv.row({"hyperlog", format_g12(f.exponent_hat),
                     format_g12(f.intercept), format_g12(f.r2),
                     format_g12(f.fit_range.first), format_g12(f.fit_range.second),
                     std::to_string(f.n_points)});
        }
        csv.close();
        files.push_back("fits.csv");
    }

    write_manifest(cfg.out_dir,
                   {{"experiment", "hilberg"},
                    {"schedule", s.spec_string()},
                    {"seed", std::to_string(cfg.seed)},
                    {"length", std::to_string(N)},
                    {"collision_budget", format_g12(collision_budget)},
                    {"tool", kToolVersion}},
                   files);
    return files;
}

std::vector<std::string> run_lz_ratio_experiment(const RunConfig& cfg) {
    Schedule s = cfg.schedule();
    size_t N = prefix_length(cfg);
    std::vector<uint64_t> m_grid = cfg.m_grid;
    if (m_grid.empty()) {
        int n_log = floor_log2(N);
        for (int l = std::min(10, n_log); l <= n_log; ++l)
            m_grid.push_back(uint64_t{1} << l);
    }
    for (uint64_t m : m_grid)
        if (m < 2 || m > N || (m & (m - 1)) != 0)
            throw config_error("m_grid entries must be powers of two within the prefix");

    ensure_dir(cfg.out_dir);
    double collision_budget = 0.0;
    size_t max_symbols = cfg.extra_u64("max_symbols", uint64_t{1} << 26);
    SymbolSequence seq =
        sample_prefix(s, N, cfg.seed, max_symbols, &collision_budget);

    std::vector<std::string> files;
    std::vector<std::pair<double, double>> ratio_points;
    {
        CsvWriter csv(cfg.out_dir + "/lz_ratio.csv",
                      {"m", "lz_bits", "lz_nats", "cap_nats", "ratio",
                       "predicted_shape"});
        for (uint64_t m : m_grid) {
            std::vector<symbol> head(seq.symbols.begin(), seq.symbols.begin() + m);
            LZ78Parse z = lz78_parse(head, s.alphabet());
            int lvl = floor_log2(m);
            double cap = top_entropy_cap(s, lvl);
            double nats = static_cast<double>(z.encoded_length_bits) * kLn2;
            double ratio = nats / cap;
            std::string shape;
            if (s.kind == ScheduleKind::hilberg) {
                double beta = s.beta;
                shape = format_g12(std::pow(static_cast<double>(m), 1.0 - beta) /
                                   std::pow(std::log(static_cast<double>(m)),
                                            1.0 / beta - 1.0));
            }
            csv.row({std::to_string(m), std::to_string(z.encoded_length_bits),
                     format_g12(nats), format_g12(cap), format_g12(ratio), shape});
            if (ratio > 0.0 && std::isfinite(ratio))
                ratio_points.emplace_back(static_cast<double>(m), ratio);
        }
        csv.close();
        files.push_back("lz_ratio.csv");
    }
    {
        CsvWriter csv(cfg.out_dir + "/lz_ratio_fit.csv",
                      {"model", "exponent_hat", "intercept", "r2", "x_lo",
                       "x_hi", "n_points"});
        if (ratio_points.size() >= 4) {
            ScalingFit f = fit_exponent(ratio_points, FitModel::power_law);
            csv.row({"power_law", format_g12(f.exponent_hat),
                     format_g12(f.intercept), format_g12(f.r2),
                     format_g12(f.fit_range.first), format_g12(f.fit_range.second),
                     std::to_string(f.n_points)});
        }
        csv.close();
        files.push_back("lz_ratio_fit.csv");
    }
    write_manifest(cfg.out_dir,
                   {{"experiment", "lz_ratio"},
                    {"schedule", s.spec_string()},
                    {"seed", std::to_string(cfg.seed)},
                    {"length", std::to_string(N)},
                    {"collision_budget", format_g12(collision_budget)},
                    {"tool", kToolVersion}},
                   files);
    return files;
}

} // namespace rha
