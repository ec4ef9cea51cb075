#include "rha/lognum.hpp"
#include "rha/errors.hpp"

#include <cmath>

namespace rha {

LogNumber LogNumber::from_value(double v) {
    if (v < 0.0) throw invariant_error("LogNumber cannot hold a negative value");
    return {std::log(v)};
}

double LogNumber::value() const { return std::exp(ln); }

LogNumber LogNumber::operator*(LogNumber o) const {
    if (is_zero() || o.is_zero()) return zero();
    return {ln + o.ln};
}

LogNumber LogNumber::operator/(LogNumber o) const {
    if (o.is_zero()) throw invariant_error("LogNumber division by zero");
    if (is_zero()) return zero();
    return {ln - o.ln};
}

LogNumber LogNumber::operator+(LogNumber o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    double hi = std::max(ln, o.ln), lo = std::min(ln, o.ln);
    return {hi + std::log1p(std::exp(lo - hi))};
}

namespace {

// Integral of ln(1 - x/a) from 0 to t, stable for t/a anywhere in [0, 1).
// Closed form: -t - (a-t) ln(1 - t/a); series when t/a is tiny and the
// closed form would cancel.
double integral_log1m(double ln_a, double a_real, double t) {
    if (t <= 0.0) return 0.0;
    double u = std::exp(std::log(t) - ln_a); // t/a, possibly underflowing to 0
    if (u < 1e-8) {
        return -0.5 * t * u * (1.0 + u / 3.0);
    }
    if (!std::isfinite(a_real)) a_real = std::exp(ln_a);
    return -t - (a_real - t) * std::log1p(-t / a_real);
}

} // namespace

Bracket ln_falling_factorial(double ln_a, double a_real, uint64_t c,
                             uint64_t direct_cap) {
    if (c == 0) return {0.0, 0.0};
    if (std::isfinite(a_real) && static_cast<double>(c) > a_real + 1e-9)
        throw config_error("falling factorial (a)_c needs c <= a");

    if (std::isfinite(a_real) && c <= direct_cap) {
        double s = 0.0;
        for (uint64_t i = 0; i < c; ++i)
            s += std::log(a_real - static_cast<double>(i));
        // numeric slop: one ulp per term plus the double image of a
        double slop = static_cast<double>(c) * 4e-16 * std::max(1.0, std::abs(ln_a));
        return {s - slop, s + slop};
    }

    // S = c ln a + sum_{i=0}^{c-1} ln(1 - i/a); the summand decreases in i,
    // so the sum is enclosed by [I(c), I(c-1)] with I(t) the integral above.
    double base = static_cast<double>(c) * ln_a;
    double lo = base + integral_log1m(ln_a, a_real, static_cast<double>(c));
    double hi = base + integral_log1m(ln_a, a_real, static_cast<double>(c) - 1.0);
    // float rounding always; series truncation only when integral_log1m
    // took its tiny-u branch (near the cutover the rounding term covers it)
    double u = std::exp(std::log(static_cast<double>(c)) - ln_a);
    double guard = 4e-16 * (std::abs(lo) + std::abs(hi)) + 1e-300;
    if (u < 1e-8) guard += 0.25 * static_cast<double>(c) * u * u;
    return {lo - guard, hi + guard};
}

Bracket ln_factorial(uint64_t b) {
    if (b < 2) return {0.0, 0.0};
    double v = std::lgamma(static_cast<double>(b) + 1.0);
    double slop = 4e-16 * std::abs(v) + 1e-300;
    return {v - slop, v + slop};
}

Qty Qty::of(uint64_t v) {
    Qty q;
    q.exact = v;
    q.real = static_cast<double>(v);
    q.ln = std::log(q.real); // -inf at v = 0; only C(a,0) = 1 consumes that
    return q;
}

Qty Qty::from_ln(double l) {
    Qty q;
    q.ln = l;
    q.exact = std::nullopt;
    q.real = std::exp(l);
    return q;
}

Qty Qty::square(const Qty& a) {
    Qty q;
    q.ln = 2.0 * a.ln;
    q.real = a.real * a.real;
    q.exact = std::nullopt;
    if (a.exact) {
        unsigned __int128 sq = static_cast<unsigned __int128>(*a.exact) * *a.exact;
        if (sq <= (unsigned __int128){1} << 62) q.exact = static_cast<uint64_t>(sq);
        q.real = static_cast<double>(*a.exact) * static_cast<double>(*a.exact);
        q.ln = std::log(q.real);
    }
    return q;
}

LogBin log_binomial(const Qty& a, const Qty& b) {
    LogBin out;
    out.rel_budget = 0.0;
    out.asymptotic = false;
    if (b.exact && *b.exact == 0) {
        out.nats = LogNumber::zero(); // ln C(a,0) = 0
        return out;
    }
    if (a.exact && b.exact && *b.exact > *a.exact)
        throw config_error("log_binomial: b > a");
    // C(a,a) = 1. Log-domain equality is exact for the schedules that
    // produce it (squaring, clamped hilberg set ln k_n = 2 ln k_{n-1}
    // bit-for-bit), so comparing doubles is the right test.
    if ((a.exact && b.exact && *a.exact == *b.exact) ||
        (!b.exact && b.ln == a.ln)) {
        out.nats = LogNumber::zero();
        return out;
    }

    if (b.exact) {
        // ln C(a,b) = ln (a)_b - ln b!; use the smaller of b, a-b when a is
        // native (same value, fewer terms).
        uint64_t bb = *b.exact;
        if (a.exact && *a.exact - bb < bb) bb = *a.exact - bb;
        if (bb == 0) {
            out.nats = LogNumber::zero();
            return out;
        }
        Bracket ff = ln_falling_factorial(a.ln, a.real, bb);
        Bracket bf = ln_factorial(bb);
        Bracket r = ff - bf;
        double mid = r.mid();
        out.nats = mid > 0 ? LogNumber::from_value(mid) : LogNumber::zero();
        out.rel_budget = mid > 0 ? r.width() / mid : r.width();
        out.asymptotic = !std::isfinite(a.real) || bb > (uint64_t{1} << 20);
        return out;
    }

    // Log-domain b (necessarily astronomic: native b stays exact).
    // ln C(a,b) = a H2(b/a) - 0.5 ln(2 pi a p(1-p)) - theta/12 with
    // H2 the nats binary entropy; as p -> 0 this is the familiar
    // b ln a - ln b! - Delta with Delta <= b^2/(a-b). Uniform in p, so the
    // near-square levels a clamped schedule produces stay certified.
    if (b.ln > a.ln + 1e-12) throw config_error("log_binomial: b > a");
    double gap = a.ln - b.ln;     // ln(a/b) >= 0
    if (gap > 500.0) {
        // p = b/a underflows the direct H2; expand instead:
        // H2(p) = p (1 + gap) (1 + O(p)), so ln(a H2) = b.ln + log1p(gap)
        // with relative error ~ p, far below the stated budget.
        out.nats = LogNumber::from_ln(b.ln + std::log1p(gap));
    } else {
        double p = std::exp(-gap); // b/a in (0, 1]
        double h2 = p * gap - (1.0 - p) * std::log1p(-p);
        if (h2 <= 0.0) {
            // p rounded to 1: semantically the clamped/forced pool, C(a,a) = 1
            out.nats = LogNumber::zero();
            out.asymptotic = true;
            return out;
        }
        out.nats = LogNumber::from_ln(a.ln + std::log(h2));
    }
    // correction magnitude ~ 0.5 ln(2 pi a p(1-p)) + 1/12, relative to a H2
    double corr = 0.5 * (1.8379 + a.ln) + 0.084;
    out.rel_budget = std::exp(std::log(corr) - out.nats.ln);
    out.asymptotic = true;
    return out;
}

Bracket log_binomial_ratio(const Qty& a, const Qty& b, uint64_t c) {
    if (c == 0) return {0.0, 0.0};
    Bracket num = ln_falling_factorial(a.ln, a.real, c);
    Bracket den = ln_falling_factorial(b.ln, b.real, c);
    return num - den;
}

} // namespace rha
