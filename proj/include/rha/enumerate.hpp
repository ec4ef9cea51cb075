#pragma once

#include "rha/sampler.hpp"
#include "rha/schedule.hpp"

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace rha {

// One fully-specified grammar outcome: every pool listed explicitly,
// every C_n fixed. Produced by enumerate_exact.
struct EnumeratedGrammar {
    const Schedule* sched = nullptr;
    // pools[l][id-1] = (left, right) for Y^l_id; index 0 unused.
    std::vector<std::vector<std::pair<uint64_t, uint64_t>>> pools;
    std::vector<uint64_t> c; // c[n] = C_n, 1-based value

    std::vector<symbol> block_string(int level, uint64_t id) const;
    std::vector<symbol> prefix_string(size_t N) const;
    // K_{n,j} under this outcome (needs levels up to n + ceil(log2 j)).
    uint64_t k_value(int n, uint64_t j) const;
    // level-m pool indices of the 2^{level-m} sub-blocks of Y^level_id
    std::vector<uint64_t> sub_ids(int level, uint64_t id, int m) const;
};

struct EnumOptions {
    // Levels outside [pool_lo, pool_hi] keep a fixed pool; levels outside
    // [c_lo, c_hi] keep C = 1. Valid when the visitor's statistic does not
    // depend on them (uniform marginalization), which keeps K-pair oracles
    // inside the budget.
    int pool_lo = 1;
    int pool_hi = INT32_MAX;
    int c_lo = 0;
    int c_hi = INT32_MAX;
    double budget = 1e7;
};

// Visits every grammar outcome with its probability (uniform, = 1/total);
// returns the outcome count. Throws budget_error past opt.budget outcomes
// and config_error when any k_n is not exactly representable.
uint64_t enumerate_exact(
    const Schedule& s,
    const std::function<void(const EnumeratedGrammar&, double)>& visit,
    EnumOptions opt = {});

} // namespace rha
