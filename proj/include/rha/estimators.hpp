#pragma once

#include "rha/sampler.hpp"
#include "rha/schedule.hpp"

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace rha {

struct EmpiricalDistribution {
    std::map<std::vector<symbol>, uint64_t> counts;
    uint64_t total = 0;

    void add(const std::vector<symbol>& key) {
        ++counts[key];
        ++total;
    }
    double prob(const std::vector<symbol>& key) const;
    // TV to an exact law given as string -> probability (missing keys = 0)
    double tv_distance(const std::map<std::vector<symbol>, double>& exact) const;
};

struct PluginEntropy {
    double h_hat;         // plug-in entropy, nats
    double miller_madow;  // (support-1)/(2R), reported, not applied
    uint64_t support;
};

PluginEntropy plugin_block_entropy(const Schedule& s, int n, uint64_t R,
                                   uint64_t seed);

struct TvResult {
    double tv;
    double band;    // E[TV] + 3 sigma under the uniform null
    uint64_t cells; // support size k_n^2
};

// TV of (K_{n,j}, K_{n,j+1}) against uniform on {1..k_n}^2. The schedule is
// continued by squaring above n_max when the recursion needs it.
TvResult kpair_uniformity_oracle(const Schedule& s, int n, uint64_t j,
                                 double budget = 1e7);
TvResult kpair_uniformity_mc(const Schedule& s, int n, uint64_t j, uint64_t R,
                             uint64_t seed);

// Empirical law of a length-m window at offset uniform in {0..2^n-1} inside
// X^n_1 (the first full level-n block), averaged over R realizations.
EmpiricalDistribution stationary_mean_block(const Schedule& s, int m, int n,
                                            uint64_t R, uint64_t seed);

struct PeriodicityResult {
    double max_discrepancy; // max over x and congruent i != i' of |P_i - P_i'|
    double band;            // 0 in oracle mode; 3 sigma + continuity in MC
};

// Positions are 1-based; i_range = [lo, hi] must start at or after 2^n.
PeriodicityResult periodicity_check_oracle(const Schedule& s, int m, int n,
                                           std::pair<uint64_t, uint64_t> i_range,
                                           double budget = 1e7);
PeriodicityResult periodicity_check_mc(const Schedule& s, int m, int n,
                                       std::pair<uint64_t, uint64_t> i_range,
                                       uint64_t R, uint64_t seed);

enum class FitModel { power_law, hyperlog };

struct ScalingFit {
    FitModel model;
    double exponent_hat = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::pair<double, double> fit_range{0.0, 0.0}; // x-range actually used
    size_t n_points = 0;
};

// Least squares of ln y on ln x (power_law) or on ln ln x (hyperlog).
ScalingFit fit_exponent(const std::vector<std::pair<double, double>>& points,
                        FitModel model);

// E[TV] + 3 sigma for an R-sample empirical law vs uniform over `cells`.
double tv_band(uint64_t cells, uint64_t R);

// Exhaustive-enumeration ground truths at oracle scale.
// P(the 2^{n-m} level-m pool indices inside X^n_1 are pairwise distinct);
// index distinctness coincides with block-string distinctness because
// distinct pool entries expand to distinct strings (pairs are distinct).
double no_repeat_oracle(const Schedule& s, int n, int m, double budget = 1e7);
// exact H(X^n_j) in nats (the law of Y^n_K, K uniform)
double block_entropy_oracle(const Schedule& s, int n, double budget = 1e7);
// exact offset-averaged window law: (1/2^n) sum_j P(X_{2^n+j:2^n+j+m-1} = x)
std::map<std::vector<symbol>, double> stationary_oracle(const Schedule& s,
                                                        int m, int n,
                                                        double budget = 1e7);
// MC distinctness estimate matching no_repeat_oracle's event
double no_repeat_mc(const Schedule& s, int n, int m, uint64_t R, uint64_t seed);

} // namespace rha
