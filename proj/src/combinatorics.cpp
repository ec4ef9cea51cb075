#include "rha/combinatorics.hpp"
#include "rha/errors.hpp"

#include <cmath>

namespace rha {

namespace {

constexpr uint64_t kDirectCap = uint64_t{1} << 20;

Qty qty_k(const Schedule& s, int n) {
    if (s.has_exact(n)) return Qty::of(s.k(n));
    return Qty::from_ln(s.lnk(n));
}

// k_t < 2^{n-t}, decided exactly or in log-domain.
bool too_few_blocks(const Schedule& s, int t, int n) {
    if (s.has_exact(t)) {
        if (n - t >= 63) return true;
        return s.k(t) < (uint64_t{1} << (n - t));
    }
    return s.lnk(t) < (n - t) * std::log(2.0) - 1e-12;
}

} // namespace

BoundReport prob_no_repeat(const Schedule& s, int n, int m) {
    if (m < 0 || m > n) throw config_error("prob_no_repeat needs 0 <= m <= n");
    if (n > s.n_max) throw config_error("prob_no_repeat: n beyond schedule");
    BoundReport r;
    if (m == n) {
        r.value = LogNumber::one(); // P(A_nn) = 1
        return r;
    }
    for (int t = m; t < n; ++t) {
        if (too_few_blocks(s, t, n)) {
            r.value = LogNumber::zero();
            return r;
        }
    }

    bool exact_ok = static_cast<uint64_t>(n - m) < 63 &&
                    (uint64_t{1} << (n - m)) <= kDirectCap;
    if (exact_ok)
        for (int t = m; t < n; ++t) exact_ok = exact_ok && s.has_exact(t);

    if (exact_ok) {
        // ln P = sum_t [ ln (k_t)_{2^{n-t}} - ln (k_t^2)_{2^{n-t-1}} ]
        Bracket acc{0.0, 0.0};
        for (int t = m; t < n; ++t) {
            Qty kt = qty_k(s, t);
            Qty kt2 = Qty::square(kt);
            uint64_t c = uint64_t{1} << (n - t);
            acc = acc + ln_falling_factorial(kt.ln, kt.real, c) -
                  ln_falling_factorial(kt2.ln, kt2.real, c / 2);
        }
        r.value = LogNumber::from_ln(acc.mid());
        r.method = BoundReport::Method::exact;
        // absolute budget on a probability: |e^hi - e^lo| <= width * value
        r.error_budget = acc.width() * std::exp(std::min(acc.hi, 0.0));
        r.arg_l = m;
        return r;
    }

    // Proof bound (UpperNoRepeat) at l = m: P(A_nm) >= 1 - 2^n F/D with
    // F = k_m (2^{n-m+1}-3) + 2, D = k_m^2 - 2^{n-m-1} + 1. Certified
    // bracket [lb, 1].
    double ln2 = std::log(2.0);
    double lnk = s.lnk(m);
    double ln_ratio = n * ln2 + lnk + (n - m + 1) * ln2 - 2.0 * lnk;
    double lb;
    if (ln_ratio < -1.0) {
        // deep tail: 2^n F/D <= 2^{2n-m+1}/k_m * (1 + 2X) with
        // X = 2^{n-m-1}/k_m^2 the denominator correction; inflating by it
        // keeps the result a certified lower bound.
        double infl = std::log1p(2.0 * std::exp((n - m - 1) * ln2 - 2.0 * lnk));
        lb = 1.0 - std::exp(ln_ratio + infl);
    } else if (s.has_exact(m) && n - m + 1 < 63) {
        double k = static_cast<double>(s.k(m));
        double F = k * (std::ldexp(1.0, n - m + 1) - 3.0) + 2.0;
        double D = k * k - std::ldexp(1.0, n - m - 1) + 1.0;
        lb = (D > 0.0) ? 1.0 - std::ldexp(1.0, n) * F / D : 0.0;
    } else {
        lb = 0.0;
    }
    lb = std::max(lb, 0.0);
    r.value = LogNumber::from_value(lb);
    r.method = BoundReport::Method::asymptotic;
    r.error_budget = 1.0 - lb;
    r.arg_l = m;
    return r;
}

BoundReport grammar_entropy(const Schedule& s, int n) {
    if (n < 0 || n > s.n_max) throw config_error("grammar_entropy: level out of range");
    BoundReport r;
    r.value = LogNumber::zero();
    double worst_rel = 0.0;
    bool any_asym = false;
    for (int l = 1; l <= n; ++l) {
        LogBin term = log_binomial(Qty::square(qty_k(s, l - 1)), qty_k(s, l));
        r.value = r.value + term.nats;
        worst_rel = std::max(worst_rel, term.rel_budget);
        any_asym = any_asym || term.asymptotic;
    }
    r.method = any_asym ? BoundReport::Method::asymptotic : BoundReport::Method::exact;
    r.error_budget = worst_rel;
    return r;
}

BoundReport block_entropy_upper(const Schedule& s, int n) {
    if (n < 0 || n > s.n_max) throw config_error("block_entropy_upper: level out of range");
    BoundReport r;
    double best = std::numeric_limits<double>::infinity();
    int best_l = 0;
    LogNumber ge = LogNumber::zero();
    double worst_rel = 0.0;
    bool any_asym = false;
    for (int l = 0; l <= n; ++l) {
        if (l >= 1) {
            LogBin term = log_binomial(Qty::square(qty_k(s, l - 1)), qty_k(s, l));
            ge = ge + term.nats;
            worst_rel = std::max(worst_rel, term.rel_budget);
            any_asym = any_asym || term.asymptotic;
        }
        // H(G_{<=l}) is nondecreasing in l: once it alone beats the best
        // candidate, later l cannot win.
        double ge_val = ge.is_zero() ? 0.0 : ge.value(); // +inf when astronomic
        if (ge_val > best) break;
        double cand = ge_val + std::ldexp(s.lnk(l), n - l);
        if (cand < best) {
            best = cand;
            best_l = l;
        }
    }
    r.value = LogNumber::from_value(best);
    r.method = any_asym ? BoundReport::Method::asymptotic : BoundReport::Method::exact;
    r.error_budget = worst_rel;
    r.arg_l = best_l;
    return r;
}

BoundReport block_entropy_lower(const Schedule& s, int n) {
    if (n < 0 || n > s.n_max) throw config_error("block_entropy_lower: level out of range");
    BoundReport r;
    double best = 0.0;
    int best_l = -1;
    double best_rel = 0.0;
    bool any_asym = false;
    for (int l = 1; l <= n; ++l) {
        // c = 2^{n-l} distinct blocks demanded; if k_l < c the event has
        // probability zero and the term vanishes.
        if (n - l >= 63 || too_few_blocks(s, l, n)) continue;
        uint64_t c = uint64_t{1} << (n - l);
        BoundReport p = prob_no_repeat(s, n, l);
        if (p.value.is_zero()) continue;
        double p_lo = std::max(0.0, p.value.value() - p.error_budget);
        if (p_lo <= 0.0) continue;
        Qty kl = qty_k(s, l);
        Qty a = Qty::square(qty_k(s, l - 1));
        // ln C(a, k_l) - ln C(a - c, k_l - c) = ln (a)_c - ln (k_l)_c
        Bracket d = log_binomial_ratio(a, kl, c);
        double cand = d.lo * p_lo;
        if (cand > best) {
            best = cand;
            best_l = l;
            double cand_hi = d.hi * std::min(1.0, p.value.value() + p.error_budget);
            best_rel = cand > 0 ? (cand_hi - cand) / cand : 0.0;
            any_asym = p.method == BoundReport::Method::asymptotic;
        }
    }
    r.value = LogNumber::from_value(best);
    r.method = any_asym ? BoundReport::Method::asymptotic : BoundReport::Method::exact;
    r.error_budget = best_rel;
    r.arg_l = best_l;
    return r;
}

double conditional_block_entropy(const Schedule& s, int n) {
    if (n < 0 || n > s.n_max)
        throw config_error("conditional_block_entropy: level out of range");
    return s.lnk(n);
}

Sandwich entropy_rate_sandwich(const Schedule& s) {
    EntropyRate h = combinatorial_entropy_rate(s);
    return {h.value / 2.0, 2.0 * h.value, h.analytic_zero};
}

double top_entropy_cap(const Schedule& s, int m) {
    if (m < 0 || m > s.n_max) throw config_error("top_entropy_cap: level out of range");
    return 2.0 * s.lnk(m);
}

double lz_ratio_floor(uint64_t measured_L, uint64_t m) {
    if (m < 1) throw config_error("lz_ratio_floor needs m >= 1");
    double q = static_cast<double>(m) / static_cast<double>(measured_L + 1);
    return q * std::log(q);
}

} // namespace rha
