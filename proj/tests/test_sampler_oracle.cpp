#include "doctest.h"

#include "rha/enumerate.hpp"
#include "rha/errors.hpp"
#include "rha/estimators.hpp"
#include "rha/sampler.hpp"
#include "rha/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

using namespace rha;

namespace {

// exact law of the first N symbols, by full enumeration
std::map<std::vector<symbol>, double> prefix_law(const Schedule& s, size_t N) {
    std::map<std::vector<symbol>, double> law;
    enumerate_exact(s, [&](const EnumeratedGrammar& g, double p) {
        law[g.prefix_string(N)] += p;
    });
    return law;
}

// exact law of X^n_j (C-independent: pools enumerated, K marginalized by hand)
std::map<std::vector<symbol>, double> block_law(const Schedule& s, int n) {
    std::map<std::vector<symbol>, double> law;
    EnumOptions opt;
    opt.c_lo = 1;
    opt.c_hi = 0; // freeze every C_n; the block law never reads them
    uint64_t kn = s.k(n);
    enumerate_exact(
        s,
        [&](const EnumeratedGrammar& g, double p) {
            for (uint64_t id = 1; id <= kn; ++id)
                law[g.block_string(n, id)] += p / static_cast<double>(kn);
        },
        opt);
    return law;
}

} // namespace

TEST_CASE("sample_prefix reproduces the enumerated prefix law") {
    struct Case {
        std::vector<uint64_t> ks;
        size_t N;
    };
    for (const Case& c : {Case{{2, 2, 4, 16}, 8}, Case{{2, 3, 7}, 7}}) {
        Schedule s = make_explicit_schedule(c.ks);
        auto law = prefix_law(s, c.N);

        const uint64_t R = 40000;
        EmpiricalDistribution emp;
        for (uint64_t r = 0; r < R; ++r)
            emp.add(sample_prefix(s, c.N, 1000 + r).symbols);

        double tv = emp.tv_distance(law);
        CHECK(tv <= tv_band(law.size(), R));
    }
}

TEST_CASE("sample_block reproduces the enumerated block law") {
    Schedule s = make_explicit_schedule({2, 3, 7});
    auto law = block_law(s, 2);

    const uint64_t R = 40000;
    EmpiricalDistribution emp;
    for (uint64_t r = 0; r < R; ++r)
        emp.add(sample_block(s, 2, 500 + r).symbols);
    CHECK(emp.tv_distance(law) <= tv_band(law.size(), R));
}

TEST_CASE("the window at positions [2^n, 2^{n+1}-1] has the block law") {
    Schedule s = make_explicit_schedule({2, 3, 7});
    auto law = block_law(s, 2);

    const uint64_t R = 40000;
    EmpiricalDistribution emp;
    for (uint64_t r = 0; r < R; ++r) {
        SymbolSequence seq = sample_prefix(s, 7, 9000 + r);
        emp.add({seq.symbols.begin() + 3, seq.symbols.begin() + 7});
    }
    CHECK(emp.tv_distance(law) <= tv_band(law.size(), R));
}

TEST_CASE("C_n is uniform on its pool") {
    Schedule s = make_explicit_schedule({2, 4});
    const uint64_t R = 30000;
    std::vector<uint64_t> hits(4, 0);
    for (uint64_t r = 0; r < R; ++r) {
        LazyGrammar g(s, SplitRng(r));
        BlockId c = g.c_value(1);
        REQUIRE(c >= 1);
        REQUIRE(c <= 4);
        ++hits[static_cast<size_t>(c) - 1];
    }
    double tv = 0.0;
    for (uint64_t h : hits)
        tv += 0.5 * std::abs(static_cast<double>(h) / R - 0.25);
    CHECK(tv <= tv_band(4, R));
}

TEST_CASE("longer prefixes extend shorter ones") {
    Schedule s = make_hilberg_schedule(0.5, 10);
    SymbolSequence small = sample_prefix(s, 100, 77);
    SymbolSequence big = sample_prefix(s, 1000, 77);
    REQUIRE(small.size() == 100);
    REQUIRE(big.size() == 1000);
    CHECK(std::equal(small.symbols.begin(), small.symbols.end(),
                     big.symbols.begin()));
    CHECK(small.alphabet_size == 2);
    CHECK(small.seed == 77);
    CHECK(small.schedule_spec == s.spec_string());
}

TEST_CASE("same seed, same sequence; different seed, different sequence") {
    Schedule s = make_hilberg_schedule(0.5, 12);
    SymbolSequence a = sample_prefix(s, 4096, 1);
    SymbolSequence b = sample_prefix(s, 4096, 1);
    SymbolSequence c = sample_prefix(s, 4096, 2);
    CHECK(a.symbols == b.symbols);
    CHECK(a.symbols != c.symbols);
}

TEST_CASE("exact-pair levels produce distinct pairs, exhausting the candidates") {
    Schedule s9 = make_explicit_schedule({2, 3, 9});
    LazyGrammar g(s9, SplitRng(5));
    std::set<std::pair<uint64_t, uint64_t>> seen;
    for (uint64_t id = 1; id <= 9; ++id) {
        auto [l, r] = g.lazy_pair(2, id);
        CHECK(l >= 1);
        CHECK(l <= 3);
        CHECK(r >= 1);
        CHECK(r <= 3);
        seen.insert({static_cast<uint64_t>(l), static_cast<uint64_t>(r)});
    }
    CHECK(seen.size() == 9); // k_2 = k_1^2: the pool is all of {1..3}^2

    Schedule s7 = make_explicit_schedule({2, 3, 7});
    LazyGrammar g7(s7, SplitRng(6));
    std::set<std::pair<uint64_t, uint64_t>> seen7;
    for (uint64_t id = 1; id <= 7; ++id) {
        auto [l, r] = g7.lazy_pair(2, id);
        seen7.insert({static_cast<uint64_t>(l), static_cast<uint64_t>(r)});
    }
    CHECK(seen7.size() == 7);
    // idempotent per (level, id)
    CHECK(g7.lazy_pair(2, 3) == g7.lazy_pair(2, 3));
}

TEST_CASE("k_index satisfies the pair recursion") {
    Schedule s = make_hilberg_schedule(0.5, 8);
    LazyGrammar g(s, SplitRng(13));
    for (int n = 0; n <= 5; ++n) {
        CHECK(g.k_index(n, 1) == g.c_value(n));
        for (uint64_t j = 1; j <= 4; ++j) {
            auto [l, r] = g.lazy_pair(n + 1, g.k_index(n + 1, j));
            CHECK(g.k_index(n, 2 * j) == l);
            CHECK(g.k_index(n, 2 * j + 1) == r);
        }
    }
    // exact levels hand out raw indices, never tags
    CHECK(!(g.k_index(3, 5) & kTagBit));
}

TEST_CASE("forcing independent mode at tiny k blows the collision budget") {
    Schedule s = make_explicit_schedule({2, 3, 7});
    LazyGrammar g(s, SplitRng(21), 1);
    bool tripped = false;
    try {
        for (uint64_t id = 1; id <= 7; ++id) g.lazy_pair(2, id);
    } catch (const budget_error&) {
        tripped = true;
    }
    CHECK(tripped);
    CHECK(g.collision_budget() > 1e-13);
}

TEST_CASE("tag-mode sampling stays within the collision budget") {
    // k doubles its exponent per level: 2^15, 2^30, 2^60, then log-domain
    Schedule s = make_squaring_schedule(uint64_t{1} << 15, 8);
    double budget = 0.0;
    SymbolSequence seq = sample_prefix(s, 256, 9, size_t{1} << 26, &budget);
    REQUIRE(seq.size() == 256);
    for (symbol v : seq.symbols) {
        CHECK(v >= 1);
        CHECK(v <= (uint64_t{1} << 15));
    }
    CHECK(budget > 0.0);
    CHECK(budget < 1e-12);

    SymbolSequence again = sample_prefix(s, 256, 9);
    CHECK(seq.symbols == again.symbols);
}

TEST_CASE("sampler rejects out-of-range requests") {
    Schedule s = make_explicit_schedule({2, 2});
    CHECK_THROWS_AS(sample_prefix(s, 4, 0), config_error);
    CHECK(sample_prefix(s, 3, 0).size() == 3);
    CHECK_THROWS_AS(sample_block(s, 2, 0), config_error);
    CHECK_THROWS_AS(sample_block(s, -1, 0), config_error);
    CHECK_THROWS_AS(sample_prefix(s, 3, 0, 2), budget_error);

    Schedule deep = make_hilberg_schedule(0.5, 27);
    CHECK_THROWS_AS(sample_block(deep, 27, 0), budget_error);

    Schedule wide = make_constant_schedule(65536, 1);
    CHECK_THROWS_AS(sample_prefix(wide, 3, 0), config_error);
}
