#include "doctest.h"

#include "rha/errors.hpp"
#include "rha/schedule.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

using namespace rha;

// floor(exp(2^(n/2))) for n = 0..10, checked against a 256-bit independent
// evaluation; k_11 ~ 4.5e19 exceeds the 2^62 exactness threshold.
static const std::vector<uint64_t> kHalfBetaExact = {
    2,    4,    7,     16,      54,         286,
    2980, 81937, 8886110, 6713706352ULL, 78962960182680ULL};

TEST_CASE("hilberg beta=0.5 materializes the exact perplexities") {
    Schedule s = make_hilberg_schedule(0.5, 14);
    REQUIRE(s.levels() == 15);
    for (int n = 0; n <= 10; ++n) {
        REQUIRE(s.has_exact(n));
        CHECK(s.k(n) == kHalfBetaExact[n]);
        CHECK(s.lnk(n) == doctest::Approx(std::log(static_cast<double>(
                              kHalfBetaExact[n]))).epsilon(1e-14));
    }
    CHECK(!s.has_exact(11));
    CHECK(!s.has_exact(14));
    // unclamped levels carry ln k_n = 2^(beta n) exactly
    CHECK(s.lnk(11) == std::exp2(0.5 * 11));
    CHECK_THROWS_AS(s.k(11), invariant_error);
    CHECK(s.alphabet() == 2);
}

TEST_CASE("hilberg beta=0.7 clamps k_1 to k_0^2") {
    Schedule s = make_hilberg_schedule(0.7, 4);
    CHECK(s.k(0) == 2);
    CHECK(s.k(1) == 4); // floor(exp(2^0.7)) = 5 exceeds k_0^2
    CHECK(validate_schedule(s).empty());
}

TEST_CASE("hilberg beta=0.99 is fully clamped: ln k_n = 2^n ln 2") {
    Schedule s = make_hilberg_schedule(0.99, 52);
    for (int n = 0; n <= 52; ++n)
        CHECK(s.lnk(n) == std::ldexp(std::log(2.0), n)); // bit-exact
    CHECK(s.k(5) == uint64_t{1} << 32);
    CHECK(!s.has_exact(6)); // 2^64 > 2^62
}

TEST_CASE("validate_schedule reports each failed growth constraint") {
    CHECK(validate_schedule(make_explicit_schedule({2, 4, 16})).empty());
    auto v1 = validate_schedule(make_explicit_schedule({3, 2}));
    REQUIRE(v1.size() == 1);
    CHECK(v1[0].level == 1);
    CHECK(v1[0].side == ScheduleViolation::Side::below_previous);
    auto v2 = validate_schedule(make_explicit_schedule({2, 5}));
    REQUIRE(v2.size() == 1);
    CHECK(v2[0].side == ScheduleViolation::Side::above_square);
    CHECK_THROWS_AS(require_valid(make_explicit_schedule({2, 5})),
                    config_error);
    CHECK_THROWS_AS(make_explicit_schedule({}), config_error);
    CHECK_THROWS_AS(make_explicit_schedule({0, 1}), config_error);
}

TEST_CASE("degenerate unary schedule is legal") {
    Schedule s = make_explicit_schedule({1, 1, 1});
    CHECK(validate_schedule(s).empty());
    CHECK(s.lnk(2) == 0.0);
    CHECK(s.alphabet() == 1);
}

TEST_CASE("constant and squaring generators") {
    Schedule c = make_constant_schedule(3, 5);
    for (int n = 0; n <= 5; ++n) CHECK(c.k(n) == 3);
    CHECK(validate_schedule(c).empty());

    Schedule q = make_squaring_schedule(2, 6);
    for (int n = 0; n <= 6; ++n)
        CHECK(q.lnk(n) == doctest::Approx(std::ldexp(std::log(2.0), n)));
    CHECK(q.k(5) == uint64_t{1} << 32);
    CHECK(!q.has_exact(6));
}

TEST_CASE("extended_squaring appends k^2 levels and stays valid") {
    Schedule s = make_explicit_schedule({2, 3});
    Schedule e = s.extended_squaring(2);
    REQUIRE(e.levels() == 4);
    CHECK(e.k(0) == 2);
    CHECK(e.k(1) == 3);
    CHECK(e.k(2) == 9);
    CHECK(e.k(3) == 81);
    CHECK(validate_schedule(e).empty());
    // extending past the exact threshold falls back to the log domain
    Schedule far = make_constant_schedule(7, 0).extended_squaring(40);
    CHECK(!far.has_exact(40));
    CHECK(far.lnk(40) ==
          doctest::Approx(std::ldexp(std::log(7.0), 40)).epsilon(1e-12));
}

TEST_CASE("entropy rate: analytic zero for hilberg, positive for squaring") {
    EntropyRate h = combinatorial_entropy_rate(make_hilberg_schedule(0.5, 20));
    CHECK(h.analytic_zero);
    CHECK(h.value == 0.0);
    CHECK(h.finite_range_min > 0.0);

    EntropyRate q = combinatorial_entropy_rate(make_squaring_schedule(2, 10));
    CHECK(!q.analytic_zero);
    CHECK(q.value == doctest::Approx(std::log(2.0)));

    EntropyRate c = combinatorial_entropy_rate(make_constant_schedule(4, 8));
    CHECK(!c.analytic_zero);
    // inf_n 2^-n ln 4 over materialized levels -> attained at n_max
    CHECK(c.value == doctest::Approx(std::ldexp(std::log(4.0), -8)));
    CHECK(c.argmin == 8);
}

TEST_CASE("spec_string round-trips through the constructors") {
    CHECK(make_hilberg_schedule(0.5, 22).spec_string() ==
          "hilberg(beta=0.5,n_max=22)");
    CHECK(make_explicit_schedule({2, 3, 9}).spec_string() ==
          "explicit([2,3,9])");
    CHECK(make_constant_schedule(3, 7).spec_string() ==
          "constant(k=3,n_max=7)");
    CHECK(make_squaring_schedule(2, 9).spec_string() ==
          "squaring(k0=2,n_max=9)");
}
