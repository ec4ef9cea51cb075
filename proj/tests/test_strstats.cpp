#include "doctest.h"

#include "rha/errors.hpp"
#include "rha/rng.hpp"
#include "rha/sampler.hpp"
#include "rha/schedule.hpp"
#include "rha/strstats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

using namespace rha;

namespace {

std::vector<int32_t> naive_sa(const std::vector<symbol>& x) {
    std::vector<int32_t> sa(x.size());
    std::iota(sa.begin(), sa.end(), 0);
    std::sort(sa.begin(), sa.end(), [&](int32_t a, int32_t b) {
        return std::lexicographical_compare(x.begin() + a, x.end(),
                                            x.begin() + b, x.end());
    });
    return sa;
}

int32_t naive_lcp_pair(const std::vector<symbol>& x, size_t a, size_t b) {
    size_t h = 0;
    while (a + h < x.size() && b + h < x.size() && x[a + h] == x[b + h]) ++h;
    return static_cast<int32_t>(h);
}

uint64_t naive_count(const std::vector<symbol>& x, size_t m) {
    std::set<std::vector<symbol>> seen;
    for (size_t i = 0; i + m <= x.size(); ++i)
        seen.insert({x.begin() + i, x.begin() + i + m});
    return seen.size();
}

std::vector<symbol> random_string(SplitRng& rng, size_t len, uint64_t alphabet) {
    std::vector<symbol> x(len);
    for (auto& v : x) v = static_cast<symbol>(1 + rng.next() % alphabet);
    return x;
}

} // namespace

TEST_CASE("suffix structure: hand cases") {
    std::vector<symbol> x{1, 2, 1, 2};
    SuffixStructure st = build_suffix_structure(x);
    CHECK(st.suffix_array == std::vector<int32_t>{2, 0, 3, 1});
    CHECK(st.lcp == std::vector<int32_t>{2, 0, 1});

    SuffixStructure ones = build_suffix_structure({1, 1, 1});
    CHECK(ones.suffix_array == std::vector<int32_t>{2, 1, 0});
    CHECK(ones.lcp == std::vector<int32_t>{1, 2});

    CHECK(build_suffix_structure({5}).suffix_array == std::vector<int32_t>{0});
    CHECK(build_suffix_structure({5}).lcp.empty());
    CHECK(build_suffix_structure({}).suffix_array.empty());
}

TEST_CASE("suffix structure matches naive sort on random strings") {
    SplitRng rng(2024);
    for (size_t len : {size_t{1}, size_t{2}, size_t{3}, size_t{7}, size_t{33},
                       size_t{64}, size_t{257}, size_t{512}}) {
        for (uint64_t alphabet : {uint64_t{1}, uint64_t{2}, uint64_t{3},
                                  uint64_t{65535}}) {
            std::vector<symbol> x = random_string(rng, len, alphabet);
            SuffixStructure st = build_suffix_structure(x);
            REQUIRE(st.suffix_array == naive_sa(x));
            REQUIRE(st.lcp.size() == (len > 1 ? len - 1 : 0));
            for (size_t i = 0; i + 1 < len; ++i)
                REQUIRE(st.lcp[i] == naive_lcp_pair(x, st.suffix_array[i],
                                                    st.suffix_array[i + 1]));
        }
    }
}

TEST_CASE("maximal_repetition: hand cases") {
    CHECK(maximal_repetition(std::vector<symbol>{1, 2, 1, 2}) == 2);
    CHECK(maximal_repetition(std::vector<symbol>{1, 1, 1}) == 2);
    CHECK(maximal_repetition(std::vector<symbol>{1, 1, 1, 1}) == 3);
    CHECK(maximal_repetition(std::vector<symbol>{1, 2, 3}) == 0);
    CHECK(maximal_repetition(std::vector<symbol>{7, 7}) == 1);
    CHECK(maximal_repetition(std::vector<symbol>{7}) == 0);
    CHECK(maximal_repetition(std::vector<symbol>{}) == 0);
}

TEST_CASE("subword_profile: hand cases and naive cross-check") {
    SubwordProfile p = subword_profile({1, 1, 2}, 3);
    CHECK(p.count(1) == 2);
    CHECK(p.count(2) == 2);
    CHECK(p.count(3) == 1);
    CHECK(p.h_top(1) == doctest::Approx(std::log(2.0)));

    CHECK(subword_profile({1, 1, 1, 1}, 4).count(2) == 1);
    CHECK(subword_profile({1, 1, 1, 1}, 4).count(4) == 1);

    SplitRng rng(99);
    for (size_t len : {size_t{5}, size_t{64}, size_t{256}}) {
        for (uint64_t alphabet : {uint64_t{2}, uint64_t{3}, uint64_t{65535}}) {
            std::vector<symbol> x = random_string(rng, len, alphabet);
            SubwordProfile prof = subword_profile(x, len);
            for (size_t m : {size_t{1}, size_t{2}, size_t{3}, size_t{5},
                             size_t{8}, len / 2, len - 1, len}) {
                if (m < 1 || m > len) continue;
                REQUIRE(prof.count(m) == naive_count(x, m));
            }
        }
    }

    CHECK_THROWS_AS(subword_profile({1, 2}, 0), config_error);
    CHECK_THROWS_AS(subword_profile({1, 2}, 3), config_error);
}

TEST_CASE("both subword_profile overloads agree") {
    SplitRng rng(7);
    std::vector<symbol> x = random_string(rng, 200, 3);
    SuffixStructure st = build_suffix_structure(x);
    SubwordProfile a = subword_profile(x, 200);
    SubwordProfile b = subword_profile(st, x.size(), 200);
    CHECK(a.counts == b.counts);
}

TEST_CASE("duality: hand cases") {
    DualityCheck d = check_duality(std::vector<symbol>{1, 2, 1, 2}, 2);
    CHECK(d.implied_repeat);
    CHECK(d.consistent);

    DualityCheck e = check_duality(std::vector<symbol>{1, 2, 3}, 1);
    CHECK(!e.implied_repeat);
    CHECK(e.consistent);

    CHECK_THROWS_AS(check_duality(std::vector<symbol>{1, 2}, 0), config_error);
    CHECK_THROWS_AS(check_duality(std::vector<symbol>{1, 2}, 3), config_error);
}

TEST_CASE("duality and L agree with the subword profile on random strings") {
    SplitRng rng(31337);
    for (int rep = 0; rep < 60; ++rep) {
        size_t len = 2 + rng.next() % 300;
        uint64_t alphabet = 1 + rng.next() % 4;
        std::vector<symbol> x = random_string(rng, len, alphabet);
        SuffixStructure st = build_suffix_structure(x);
        SubwordProfile prof = subword_profile(st, len, len);
        uint64_t L = maximal_repetition(st);

        uint64_t L_from_counts = 0;
        for (size_t m = 1; m <= len; ++m) {
            DualityCheck d = check_duality(prof.count(m), L, len, m);
            REQUIRE(d.consistent);
            if (prof.count(m) < len - m + 1) L_from_counts = m;
        }
        // counts say "some length-m window repeats" exactly for m <= L
        REQUIRE(L_from_counts == L);
    }
}

TEST_CASE("lz78: hand cases") {
    LZ78Parse ones = lz78_parse({1, 1, 1, 1}, 1);
    CHECK(ones.phrase_count == 3); // (1)(11)(1 bare)
    CHECK(ones.encoded_length_bits == 3);
    CHECK(ones.max_phrase_length == 2);
    CHECK(ones.code_length_bound == doctest::Approx(3.0 * std::log(3.0)));

    LZ78Parse ab = lz78_parse({1, 2, 1, 2}, 2);
    CHECK(ab.phrase_count == 3); // (1)(2)(12)
    CHECK(ab.encoded_length_bits == 6);
    CHECK(ab.max_phrase_length == 2);

    // (2)(1)(21)(212)(2 bare): pointer bits 0,1,2,2,3 plus one symbol bit each
    LZ78Parse w = lz78_parse({2, 1, 2, 1, 2, 1, 2, 2}, 2);
    CHECK(w.phrase_count == 5);
    CHECK(w.encoded_length_bits == 13);
    CHECK(w.max_phrase_length == 3);

    LZ78Parse tri = lz78_parse({1, 2, 3}, 3);
    CHECK(tri.phrase_count == 3);
    CHECK(tri.encoded_length_bits == 9); // two symbol bits per phrase

    LZ78Parse empty = lz78_parse({}, 2);
    CHECK(empty.phrase_count == 0);
    CHECK(empty.encoded_length_bits == 0);
    CHECK(empty.code_length_bound == 0.0);
    CHECK(empty.max_phrase_length == 0);

    LZ78Parse single = lz78_parse({1}, 1);
    CHECK(single.phrase_count == 1);
    CHECK(single.encoded_length_bits == 0);
    CHECK(single.code_length_bound == 0.0);

    CHECK_THROWS_AS(lz78_parse({1}, 0), config_error);
}

TEST_CASE("lz78 phrases never exceed the maximal repetition plus one") {
    SplitRng rng(555);
    for (int rep = 0; rep < 40; ++rep) {
        size_t len = 1 + rng.next() % 400;
        uint64_t alphabet = 1 + rng.next() % 3;
        std::vector<symbol> x = random_string(rng, len, alphabet);
        LZ78Parse z = lz78_parse(x, alphabet);
        CHECK(z.max_phrase_length <= maximal_repetition(x) + 1);
        CHECK(z.phrase_count >= 1);
        CHECK(z.phrase_count <= len);
    }
}

TEST_CASE("rha prefix: top entropy under the cap, duality clean") {
    Schedule s = make_hilberg_schedule(0.5, 12);
    SymbolSequence seq = sample_prefix(s, 4096, 4242);
    SuffixStructure st = build_suffix_structure(seq.symbols);
    SubwordProfile prof = subword_profile(st, seq.size(), 1024);
    uint64_t L = maximal_repetition(st);
    REQUIRE(L < 1024);

    // distinct 2^j-windows <= (aligned level-j block pairs) x (2^j offsets)
    for (int j = 0; j <= 10; ++j) {
        size_t m = size_t{1} << j;
        CHECK(prof.h_top(m) <= 2.0 * s.lnk(j) + j * 0.6931471805599453 + 1e-9);
    }
    for (size_t m = 1; m <= 1024; ++m)
        REQUIRE(check_duality(prof.count(m), L, seq.size(), m).consistent);

    LZ78Parse z = lz78_parse(seq.symbols, seq.alphabet_size);
    CHECK(z.max_phrase_length <= L + 1);
}
