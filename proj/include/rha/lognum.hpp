#pragma once

#include <cstdint>
#include <limits>
#include <optional>

namespace rha {

// Nonnegative real carried as its natural log. sign is implicit: zero()
// has ln = -inf, everything else is positive. Sums go through log-sum-exp;
// subtraction is deliberately absent (not closed on nonnegatives).
struct LogNumber {
    double ln = -std::numeric_limits<double>::infinity();

    static LogNumber zero() { return {}; }
    static LogNumber one() { return {0.0}; }
    static LogNumber from_ln(double l) { return {l}; }
    static LogNumber from_value(double v); // v >= 0

    bool is_zero() const { return ln == -std::numeric_limits<double>::infinity(); }
    double value() const; // exp(ln); +inf when out of double range

    LogNumber operator*(LogNumber o) const;
    LogNumber operator/(LogNumber o) const;
    LogNumber operator+(LogNumber o) const; // log-sum-exp
    bool operator<(LogNumber o) const { return ln < o.ln; }
    bool operator<=(LogNumber o) const { return ln <= o.ln; }
};

// Certified enclosure [lo, hi] of a scalar.
struct Bracket {
    double lo = 0.0, hi = 0.0;
    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
    Bracket operator+(const Bracket& o) const { return {lo + o.lo, hi + o.hi}; }
    Bracket operator-(const Bracket& o) const { return {lo - o.hi, hi - o.lo}; }
};

// ln of the falling factorial (a)_c = a(a-1)...(a-c+1) for real a > c-1.
// `a_real` may be +inf when a is too large for a double; only ln_a is used
// then. Direct summation up to `direct_cap` terms; beyond that an integral
// enclosure whose width -ln(1 - c/a) joins the error budget.
Bracket ln_falling_factorial(double ln_a, double a_real, uint64_t c,
                             uint64_t direct_cap = uint64_t{1} << 20);

// ln(b!) via lgamma (certified: lgamma is faithfully rounded here and the
// bracket carries a 1-ulp-scale pad).
Bracket ln_factorial(uint64_t b);

// Number that may exist as an exact machine integer, or in log-domain only.
struct Qty {
    double ln;
    std::optional<uint64_t> exact;
    double real; // best-effort double image (may be +inf)

    static Qty of(uint64_t v);
    static Qty from_ln(double l);
    // a^2 for a given level's k (keeps exactness when the square fits).
    static Qty square(const Qty& a);
};

// ln C(a, b). The returned LogNumber represents the NUMBER ln C(a,b) in
// nats (its .ln field is ln(ln C(a,b))): for log-domain b the entropy
// itself exceeds the double range. rel_budget is relative to the value.
struct LogBin {
    LogNumber nats;
    double rel_budget;
    bool asymptotic;
};
LogBin log_binomial(const Qty& a, const Qty& b);

// ln C(a,b) - ln C(a-c, b-c) = ln (a)_c - ln (b)_c, as a certified bracket.
// Requires c <= b <= a. This is the only form the entropy lower bound
// needs, and it avoids materializing the two (astronomic) binomials.
Bracket log_binomial_ratio(const Qty& a, const Qty& b, uint64_t c);

} // namespace rha
