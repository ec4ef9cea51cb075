#include "rha/estimators.hpp"

#include "rha/enumerate.hpp"
#include "rha/errors.hpp"
#include "rha/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace rha {

namespace {

constexpr double kSqrt2OverPi = 0.7978845608028654;

Schedule ensure_levels(const Schedule& s, int need) {
    return need > s.levels() ? s.extended_squaring(need - s.levels()) : s;
}

int pair_c_depth(uint64_t j) { // K_{n,j} depends only on C_{n + floor(log2 j)}
    int d = 0;
    while (j > 1) {
        j /= 2;
        ++d;
    }
    return d;
}

uint64_t rep_seed(uint64_t seed, const char* label, uint64_t r) {
    return SplitRng(seed).child(label).child(r).key();
}

} // namespace

double EmpiricalDistribution::prob(const std::vector<symbol>& key) const {
    auto it = counts.find(key);
    return it == counts.end() ? 0.0
                              : static_cast<double>(it->second) /
                                    static_cast<double>(total);
}

double EmpiricalDistribution::tv_distance(
    const std::map<std::vector<symbol>, double>& exact) const {
    double tv = 0.0;
    for (const auto& [key, p] : exact) tv += std::abs(prob(key) - p);
    for (const auto& [key, c] : counts)
        if (!exact.count(key))
            tv += static_cast<double>(c) / static_cast<double>(total);
    return tv / 2.0;
}

PluginEntropy plugin_block_entropy(const Schedule& s, int n, uint64_t R,
                                   uint64_t seed) {
    if (R < 100) throw config_error("plugin entropy needs R >= 100");
    if (n < 0) throw config_error("block level must be nonnegative");
    Schedule ext = ensure_levels(s, n + 1);
    std::map<std::vector<symbol>, uint64_t> counts;
    for (uint64_t r = 0; r < R; ++r) {
        SymbolSequence b = sample_block(ext, n, rep_seed(seed, "plugin", r));
        ++counts[b.symbols];
        if (counts.size() > (uint64_t{1} << 22))
            throw budget_error("plugin entropy support exceeds memory budget");
    }
    PluginEntropy out{};
    out.support = counts.size();
    double h = 0.0;
    for (const auto& [key, c] : counts) {
        double p = static_cast<double>(c) / static_cast<double>(R);
        h -= p * std::log(p);
    }
    out.h_hat = h;
    out.miller_madow =
        static_cast<double>(out.support - 1) / (2.0 * static_cast<double>(R));
    return out;
}

double tv_band(uint64_t cells, uint64_t R) {
    // per-cell sigma under uniform truth; normal-approx mean |error| plus
    // 3 sigma with independent-cell variance (conservative for multinomial)
    double p = 1.0 / static_cast<double>(cells);
    double var = p * (1.0 - p) / static_cast<double>(R);
    double sd = std::sqrt(var);
    double mean_tv = 0.5 * kSqrt2OverPi * static_cast<double>(cells) * sd;
    double sd_tv =
        0.5 * std::sqrt(static_cast<double>(cells) * var * (1.0 - 2.0 / M_PI));
    return mean_tv + 3.0 * sd_tv + 1.0 / static_cast<double>(R);
}

TvResult kpair_uniformity_oracle(const Schedule& s, int n, uint64_t j,
                                 double budget) {
    if (n < 0 || n > s.n_max)
        throw config_error("kpair level outside schedule range");
    int depth = std::max(pair_c_depth(j), pair_c_depth(j + 1));
    Schedule ext = ensure_levels(s, n + depth + 1);
    if (!ext.has_exact(n))
        throw config_error("oracle mode needs exact k_n");
    uint64_t kn = ext.k(n);
    if (kn > (uint64_t{1} << 20))
        throw budget_error("k_n^2 support too large to tabulate");
    EnumOptions opt;
    opt.pool_lo = n + 1;
    opt.c_lo = n + std::min(pair_c_depth(j), pair_c_depth(j + 1));
    opt.c_hi = n + depth;
    opt.budget = budget;
    std::map<std::pair<uint64_t, uint64_t>, double> law;
    enumerate_exact(
        ext,
        [&](const EnumeratedGrammar& g, double prob) {
            law[{g.k_value(n, j), g.k_value(n, j + 1)}] += prob;
        },
        opt);
    double uniform = 1.0 / (static_cast<double>(kn) * static_cast<double>(kn));
    double tv = 0.0;
    uint64_t seen = 0;
    for (const auto& [key, p] : law) {
        tv += std::abs(p - uniform);
        ++seen;
    }
    tv += static_cast<double>(kn * kn - seen) * uniform; // unreached cells
    TvResult out{tv / 2.0, 0.0, kn * kn};
    return out;
}

TvResult kpair_uniformity_mc(const Schedule& s, int n, uint64_t j, uint64_t R,
                             uint64_t seed) {
    if (n < 0 || n > s.n_max)
        throw config_error("kpair level outside schedule range");
    int depth = std::max(pair_c_depth(j), pair_c_depth(j + 1));
    Schedule ext = ensure_levels(s, n + depth + 1);
    if (!ext.has_exact(n))
        throw config_error("MC tallies need exact k_n");
    uint64_t kn = ext.k(n);
    if (kn > (uint64_t{1} << 20))
        throw budget_error("k_n^2 support too large to tabulate");
    std::map<std::pair<uint64_t, uint64_t>, uint64_t> counts;
    for (uint64_t r = 0; r < R; ++r) {
        LazyGrammar g(ext, SplitRng(rep_seed(seed, "kpair", r)).child("rha"));
        uint64_t a = static_cast<uint64_t>(g.k_index(n, j));
        uint64_t b = static_cast<uint64_t>(g.k_index(n, j + 1));
        ++counts[{a, b}];
    }
    double uniform = 1.0 / (static_cast<double>(kn) * static_cast<double>(kn));
    double tv = 0.0;
    uint64_t seen = 0;
    for (const auto& [key, c] : counts) {
        tv += std::abs(static_cast<double>(c) / static_cast<double>(R) - uniform);
        ++seen;
    }
    tv += static_cast<double>(kn * kn - seen) * uniform;
    return {tv / 2.0, tv_band(kn * kn, R), kn * kn};
}

EmpiricalDistribution stationary_mean_block(const Schedule& s, int m, int n,
                                            uint64_t R, uint64_t seed) {
    if (m < 1 || n < 0) throw config_error("stationary_mean_block needs m >= 1, n >= 0");
    if ((uint64_t{1} << n) < static_cast<uint64_t>(m))
        throw config_error("stationary_mean_block needs m <= 2^n");
    uint64_t block = uint64_t{1} << n;
    size_t len = 2 * block + m - 2; // window at offset j ends by 2^{n+1}+m-2
    int levels = 0;
    while ((uint64_t{1} << levels) - 1 < len) ++levels;
    Schedule ext = ensure_levels(s, levels);
    EmpiricalDistribution dist;
    SplitRng offsets = SplitRng(seed).child("offset");
    for (uint64_t r = 0; r < R; ++r) {
        SymbolSequence seq = sample_prefix(ext, len, rep_seed(seed, "stat", r));
        uint64_t joff = offsets.below(block);
        size_t start = block + joff - 1; // 1-based position 2^n + joff
        dist.add(std::vector<symbol>(seq.symbols.begin() + start,
                                     seq.symbols.begin() + start + m));
    }
    return dist;
}

namespace {

// exact window laws P(X_{i:i+m-1} = x) for i in [lo, hi], via enumeration;
// integer tallies so equal laws compare exactly equal
std::map<uint64_t, std::map<std::vector<symbol>, uint64_t>> window_tallies(
    const Schedule& s, int m, std::pair<uint64_t, uint64_t> i_range,
    double budget, uint64_t* total_out) {
    size_t need = i_range.second + m - 1;
    int levels = 0;
    while ((uint64_t{1} << levels) - 1 < need) ++levels;
    Schedule ext = ensure_levels(s, levels);
    EnumOptions opt;
    opt.budget = budget;
    std::map<uint64_t, std::map<std::vector<symbol>, uint64_t>> tally;
    uint64_t total = enumerate_exact(
        ext,
        [&](const EnumeratedGrammar& g, double) {
            std::vector<symbol> pre = g.prefix_string(need);
            for (uint64_t i = i_range.first; i <= i_range.second; ++i)
                ++tally[i][std::vector<symbol>(pre.begin() + (i - 1),
                                               pre.begin() + (i - 1) + m)];
        },
        opt);
    if (total_out) *total_out = total;
    return tally;
}

} // namespace

PeriodicityResult periodicity_check_oracle(const Schedule& s, int m, int n,
                                           std::pair<uint64_t, uint64_t> i_range,
                                           double budget) {
    uint64_t period = uint64_t{1} << n;
    if (i_range.first < period)
        throw config_error("periodicity holds from position 2^n on; raise i_lo");
    if (static_cast<uint64_t>(m) > period)
        throw config_error("periodicity_check needs m <= 2^n");
    uint64_t total = 0;
    auto tally = window_tallies(s, m, i_range, budget, &total);
    uint64_t worst = 0;
    for (auto it = tally.begin(); it != tally.end(); ++it)
        for (auto jt = std::next(it); jt != tally.end(); ++jt) {
            if ((jt->first - it->first) % period != 0) continue;
            std::set<std::vector<symbol>> keys;
            for (const auto& [k, c] : it->second) keys.insert(k);
            for (const auto& [k, c] : jt->second) keys.insert(k);
            for (const auto& k : keys) {
                auto a = it->second.count(k) ? it->second.at(k) : 0;
                auto b = jt->second.count(k) ? jt->second.at(k) : 0;
                worst = std::max<uint64_t>(worst, a > b ? a - b : b - a);
            }
        }
    return {static_cast<double>(worst) / static_cast<double>(total), 0.0};
}

PeriodicityResult periodicity_check_mc(const Schedule& s, int m, int n,
                                       std::pair<uint64_t, uint64_t> i_range,
                                       uint64_t R, uint64_t seed) {
    uint64_t period = uint64_t{1} << n;
    if (i_range.first < period)
        throw config_error("periodicity holds from position 2^n on; raise i_lo");
    if (static_cast<uint64_t>(m) > period)
        throw config_error("periodicity_check needs m <= 2^n");
    size_t need = i_range.second + m - 1;
    int levels = 0;
    while ((uint64_t{1} << levels) - 1 < need) ++levels;
    Schedule ext = ensure_levels(s, levels);
    std::map<uint64_t, std::map<std::vector<symbol>, uint64_t>> tally;
    for (uint64_t r = 0; r < R; ++r) {
        SymbolSequence seq = sample_prefix(ext, need, rep_seed(seed, "period", r));
        for (uint64_t i = i_range.first; i <= i_range.second; ++i)
            ++tally[i][std::vector<symbol>(seq.symbols.begin() + (i - 1),
                                           seq.symbols.begin() + (i - 1) + m)];
    }
    double worst = 0.0;
    for (auto it = tally.begin(); it != tally.end(); ++it)
        for (auto jt = std::next(it); jt != tally.end(); ++jt) {
            if ((jt->first - it->first) % period != 0) continue;
            std::set<std::vector<symbol>> keys;
            for (const auto& [k, c] : it->second) keys.insert(k);
            for (const auto& [k, c] : jt->second) keys.insert(k);
            for (const auto& k : keys) {
                double a = it->second.count(k)
                               ? static_cast<double>(it->second.at(k)) / R
                               : 0.0;
                double b = jt->second.count(k)
                               ? static_cast<double>(jt->second.at(k)) / R
                               : 0.0;
                worst = std::max(worst, std::abs(a - b));
            }
        }
    // two independent proportions; sigma maximized at p = 1/2
    double band = 3.0 * std::sqrt(0.5 / static_cast<double>(R)) +
                  2.0 / static_cast<double>(R);
    return {worst, band};
}

double no_repeat_oracle(const Schedule& s_in, int n, int m, double budget) {
    if (m < 0 || m > n) throw config_error("no_repeat needs 0 <= m <= n");
    Schedule s = ensure_levels(s_in, n + 1);
    EnumOptions opt;
    opt.pool_lo = m + 1;
    opt.pool_hi = n;
    opt.c_lo = n;
    opt.c_hi = n;
    opt.budget = budget;
    double p = 0.0;
    enumerate_exact(
        s,
        [&](const EnumeratedGrammar& g, double prob) {
            std::vector<uint64_t> ids = g.sub_ids(n, g.c[n], m);
            std::sort(ids.begin(), ids.end());
            if (std::adjacent_find(ids.begin(), ids.end()) == ids.end()) p += prob;
        },
        opt);
    // summed enumeration weights can overshoot 1 by a few ulps
    return std::min(p, 1.0);
}

double no_repeat_mc(const Schedule& s_in, int n, int m, uint64_t R, uint64_t seed) {
    if (m < 0 || m > n) throw config_error("no_repeat needs 0 <= m <= n");
    Schedule s = ensure_levels(s_in, n + 1);
    uint64_t lo = uint64_t{1} << (n - m), hi = (uint64_t{2} << (n - m)) - 1;
    uint64_t good = 0;
    for (uint64_t r = 0; r < R; ++r) {
        LazyGrammar g(s, SplitRng(rep_seed(seed, "norep", r)).child("rha"));
        std::vector<BlockId> ids;
        ids.reserve(hi - lo + 1);
        for (uint64_t j = lo; j <= hi; ++j) ids.push_back(g.k_index(m, j));
        std::sort(ids.begin(), ids.end());
        if (std::adjacent_find(ids.begin(), ids.end()) == ids.end()) ++good;
    }
    return static_cast<double>(good) / static_cast<double>(R);
}

double block_entropy_oracle(const Schedule& s_in, int n, double budget) {
    if (n < 0) throw config_error("block level must be nonnegative");
    Schedule s = ensure_levels(s_in, n + 1);
    EnumOptions opt;
    opt.pool_hi = n;
    opt.c_lo = 1;
    opt.c_hi = 0; // no C enumeration: K is marginalized uniformly below
    opt.budget = budget;
    std::map<std::vector<symbol>, double> law;
    uint64_t kn = s.k(n);
    enumerate_exact(
        s,
        [&](const EnumeratedGrammar& g, double prob) {
            for (uint64_t K = 1; K <= kn; ++K)
                law[g.block_string(n, K)] += prob / static_cast<double>(kn);
        },
        opt);
    double h = 0.0;
    for (const auto& [key, p] : law)
        if (p > 0.0) h -= p * std::log(p);
    return h;
}

std::map<std::vector<symbol>, double> stationary_oracle(const Schedule& s,
                                                        int m, int n,
                                                        double budget) {
    if (m < 1 || (uint64_t{1} << n) < static_cast<uint64_t>(m))
        throw config_error("stationary oracle needs 1 <= m <= 2^n");
    uint64_t block = uint64_t{1} << n;
    size_t need = 2 * block + m - 2;
    int levels = 0;
    while ((uint64_t{1} << levels) - 1 < need) ++levels;
    Schedule ext = ensure_levels(s, levels);
    EnumOptions opt;
    opt.budget = budget;
    std::map<std::vector<symbol>, double> law;
    enumerate_exact(
        ext,
        [&](const EnumeratedGrammar& g, double prob) {
            std::vector<symbol> pre = g.prefix_string(need);
            for (uint64_t j = 0; j < block; ++j) {
                size_t start = block + j - 1;
                law[std::vector<symbol>(pre.begin() + start,
                                        pre.begin() + start + m)] +=
                    prob / static_cast<double>(block);
            }
        },
        opt);
    return law;
}

ScalingFit fit_exponent(const std::vector<std::pair<double, double>>& points,
                        FitModel model) {
    if (points.size() < 4)
        throw config_error("fit_exponent needs at least 4 points");
    std::vector<double> u, v;
    double lo = 0.0, hi = 0.0;
    for (const auto& [x, y] : points) {
        if (x <= 0.0 || y <= 0.0)
            throw config_error("fit_exponent needs positive coordinates");
        double ux;
        if (model == FitModel::power_law) {
            ux = std::log(x);
        } else {
            if (x <= 1.0)
                throw config_error("hyperlog fit needs x > 1");
            ux = std::log(std::log(x));
        }
        u.push_back(ux);
        v.push_back(std::log(y));
        lo = (u.size() == 1) ? x : std::min(lo, x);
        hi = (u.size() == 1) ? x : std::max(hi, x);
    }
    size_t n = u.size();
    double mu = 0.0, mv = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mu += u[i];
        mv += v[i];
    }
    mu /= static_cast<double>(n);
    mv /= static_cast<double>(n);
    double suu = 0.0, suv = 0.0, svv = 0.0;
    for (size_t i = 0; i < n; ++i) {
        suu += (u[i] - mu) * (u[i] - mu);
        suv += (u[i] - mu) * (v[i] - mv);
        svv += (v[i] - mv) * (v[i] - mv);
    }
    if (suu <= 1e-300)
        throw config_error("degenerate fit: zero variance in x");
    ScalingFit fit;
    fit.model = model;
    fit.exponent_hat = suv / suu;
    fit.intercept = mv - fit.exponent_hat * mu;
    double ssres = svv - suv * suv / suu;
    fit.r2 = svv <= 1e-300 ? 1.0 : 1.0 - ssres / svv;
    fit.fit_range = {lo, hi};
    fit.n_points = n;
    return fit;
}

} // namespace rha
