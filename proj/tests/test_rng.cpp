#include "doctest.h"

#include "rha/rng.hpp"

#include <set>
#include <vector>

using namespace rha;

TEST_CASE("next() reproduces the published splitmix64 stream for seed 0") {
    SplitRng r(0);
    CHECK(r.next() == 0xe220a8397b1dcdafULL);
    CHECK(r.next() == 0x6e789e6aa1b965f4ULL);
    CHECK(r.next() == 0x06c45d188009454fULL);
}

TEST_CASE("fnv1a64 known answers") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(SplitRng(9).child("a").key() == SplitRng(9).child(fnv1a64("a")).key());
}

TEST_CASE("child keys ignore parent stream position") {
    SplitRng a(42);
    SplitRng c1 = a.child(7);
    a.next();
    a.next();
    SplitRng c2 = a.child(7);
    CHECK(c1.key() == c2.key());
    CHECK(c1.next() == c2.next());
}

TEST_CASE("sibling and nested children give distinct streams") {
    SplitRng a(42);
    std::set<uint64_t> keys;
    for (uint64_t t = 0; t < 64; ++t) keys.insert(a.child(t).key());
    keys.insert(a.key());
    keys.insert(a.child(3).child(4).key());
    keys.insert(a.child(4).child(3).key());
    CHECK(keys.size() == 67); // parent + 64 children + two nested
}

TEST_CASE("below() stays in range and reaches every residue") {
    SplitRng r(123);
    std::vector<int> seen(6, 0);
    for (int i = 0; i < 6000; ++i) {
        uint64_t v = r.below(6);
        REQUIRE(v < 6);
        ++seen[v];
    }
    for (int c : seen) CHECK(c > 800); // 1000 expected; crude uniformity
    CHECK(r.below(1) == 0);
    CHECK(r.below(0) == 0);
}

TEST_CASE("between_1_and() covers {1..n}") {
    SplitRng r(5);
    std::set<uint64_t> seen;
    for (int i = 0; i < 200; ++i) {
        uint64_t v = r.between_1_and(4);
        REQUIRE(v >= 1);
        REQUIRE(v <= 4);
        seen.insert(v);
    }
    CHECK(seen.size() == 4);
}

TEST_CASE("unit() lies in [0,1)") {
    SplitRng r(77);
    double mean = 0.0;
    for (int i = 0; i < 10000; ++i) {
        double u = r.unit();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        mean += u;
    }
    mean /= 10000.0;
    CHECK(mean > 0.47);
    CHECK(mean < 0.53);
}

TEST_CASE("next128 is hi-then-lo of two next() calls") {
    SplitRng a(1), b(1);
    unsigned __int128 w = a.next128();
    uint64_t hi = b.next(), lo = b.next();
    CHECK(static_cast<uint64_t>(w >> 64) == hi);
    CHECK(static_cast<uint64_t>(w) == lo);
}
