#include "rha/schedule.hpp"
#include "rha/errors.hpp"

#include <mpfr.h>

#include <cmath>
#include <limits>
#include <sstream>

namespace rha {

namespace {

// floor(exp(2^(beta*n))) as a native integer, or nullopt when it cannot be
// certified to fit below `threshold`. 256-bit working precision leaves ~58
// decimal digits of slack around the floor boundary; exp of a nonzero
// rational is irrational, so ties do not occur at this precision.
std::optional<uint64_t> exact_floor_exp2pow(double beta, int n, uint64_t threshold) {
    const double ln_value = std::exp2(beta * n);
    if (ln_value > 44.0) return std::nullopt; // ln(2^62) ~ 42.975
    mpfr_t t;
    mpfr_init2(t, 256);
    mpfr_set_d(t, beta, MPFR_RNDN);
    mpfr_mul_si(t, t, n, MPFR_RNDN);
    mpfr_exp2(t, t, MPFR_RNDN);
    mpfr_exp(t, t, MPFR_RNDN);
    mpfr_floor(t, t);
    uintmax_t v = mpfr_get_uj(t, MPFR_RNDZ);
    mpfr_clear(t);
    if (v > threshold) return std::nullopt;
    return static_cast<uint64_t>(v);
}

std::optional<uint64_t> square_if_small(const std::optional<uint64_t>& k,
                                        uint64_t threshold) {
    if (!k) return std::nullopt;
    unsigned __int128 sq = static_cast<unsigned __int128>(*k) * *k;
    if (sq > threshold) return std::nullopt;
    return static_cast<uint64_t>(sq);
}

constexpr unsigned __int128 kWideCap = static_cast<unsigned __int128>(1) << 126;

std::optional<unsigned __int128> square_if_wide(
    const std::optional<unsigned __int128>& k) {
    if (!k) return std::nullopt;
    if (*k >> 64) return std::nullopt; // square would not fit 128 bits
    unsigned __int128 sq = *k * *k;
    if (sq > kWideCap) return std::nullopt;
    return sq;
}

} // namespace

std::string ScheduleViolation::describe() const {
    std::ostringstream os;
    os << "level " << level << ": "
       << (side == Side::below_previous ? "k_n < k_{n-1}" : "k_n > k_{n-1}^2");
    return os.str();
}

double Schedule::lnk(int n) const {
    if (n < 0 || n > n_max) throw invariant_error("schedule level out of range");
    return log_k[static_cast<size_t>(n)];
}

bool Schedule::has_exact(int n) const {
    if (n < 0 || n > n_max) throw invariant_error("schedule level out of range");
    return exact_k[static_cast<size_t>(n)].has_value();
}

uint64_t Schedule::k(int n) const {
    if (n < 0 || n > n_max) throw invariant_error("schedule level out of range");
    const auto& v = exact_k[static_cast<size_t>(n)];
    if (!v) throw invariant_error("k_n not materialized exactly at level " + std::to_string(n));
    return *v;
}

bool Schedule::has_exact128(int n) const {
    if (n < 0 || n > n_max) throw invariant_error("schedule level out of range");
    if (static_cast<size_t>(n) < wide_k.size() && wide_k[static_cast<size_t>(n)])
        return true;
    return exact_k[static_cast<size_t>(n)].has_value();
}

unsigned __int128 Schedule::k128(int n) const {
    if (n < 0 || n > n_max) throw invariant_error("schedule level out of range");
    if (static_cast<size_t>(n) < wide_k.size() && wide_k[static_cast<size_t>(n)])
        return *wide_k[static_cast<size_t>(n)];
    const auto& v = exact_k[static_cast<size_t>(n)];
    if (!v) throw invariant_error("k_n not materialized exactly at level " + std::to_string(n));
    return *v;
}

std::string Schedule::spec_string() const {
    std::ostringstream os;
    switch (kind) {
        case ScheduleKind::hilberg: {
            os.precision(17);
            os << "hilberg(beta=" << beta << ",n_max=" << n_max << ")";
            break;
        }
        case ScheduleKind::constant:
            os << "constant(k=" << k(0) << ",n_max=" << n_max << ")";
            break;
        case ScheduleKind::squaring:
            os << "squaring(k0=" << k(0) << ",n_max=" << n_max << ")";
            break;
        case ScheduleKind::explicit_list: {
            os << "explicit([";
            for (int n = 0; n <= n_max; ++n) os << (n ? "," : "") << k(n);
            os << "])";
            break;
        }
    }
    return os.str();
}

Schedule Schedule::extended_squaring(int extra) const {
    if (extra < 0) throw invariant_error("extended_squaring: negative extension");
    Schedule out = *this;
    out.wide_k.resize(out.exact_k.size()); // nullopt pads fall back to exact_k
    for (int i = 0; i < extra; ++i) {
        std::optional<unsigned __int128> prev_wide = out.wide_k.back();
        if (!prev_wide && out.exact_k.back())
            prev_wide = static_cast<unsigned __int128>(*out.exact_k.back());
        out.exact_k.push_back(square_if_small(out.exact_k.back(), out.exact_threshold));
        out.wide_k.push_back(square_if_wide(prev_wide));
        double ln_next = 2.0 * out.log_k.back();
        if (out.exact_k.back())
            ln_next = std::log(static_cast<double>(*out.exact_k.back()));
        out.log_k.push_back(ln_next);
        out.n_max += 1;
    }
    return out;
}

Schedule make_hilberg_schedule(double beta, int n_max, uint64_t exact_threshold) {
    if (!(beta > 0.0 && beta < 1.0))
        throw config_error("hilberg schedule requires beta in (0,1)");
    if (n_max < 0) throw config_error("n_max must be >= 0");
    if (beta * n_max >= 1024.0)
        throw config_error("2^(beta*n_max) overflows double exponent range");

    Schedule s;
    s.kind = ScheduleKind::hilberg;
    s.beta = beta;
    s.n_max = n_max;
    s.exact_threshold = exact_threshold;
    for (int n = 0; n <= n_max; ++n) {
        std::optional<uint64_t> kn = exact_floor_exp2pow(beta, n, exact_threshold);
        double ln_kn = std::exp2(beta * n); // floor correction <= exp(-2^(beta n)), dropped
        if (kn) ln_kn = std::log(static_cast<double>(*kn));
        // The raw floor can exceed k_{n-1}^2 for large beta (e.g. beta=0.7
        // gives floor(exp(2^0.7)) = 5 > 2^2); clamp so LogSubadditivity
        // holds. The paper treats (HilbergPerplexity) asymptotically where
        // the inequality is strict; at small n the clamp is the only
        // consistent reading.
        if (n > 0) {
            auto sq = square_if_small(s.exact_k.back(), exact_threshold);
            if (kn && sq && *kn > *sq) {
                kn = sq;
                ln_kn = std::log(static_cast<double>(*sq));
            } else if (ln_kn > 2.0 * s.log_k.back()) {
                kn = sq;
                ln_kn = 2.0 * s.log_k.back();
                if (kn) ln_kn = std::log(static_cast<double>(*kn));
            }
        }
        s.exact_k.push_back(kn);
        s.log_k.push_back(ln_kn);
    }
    require_valid(s);
    return s;
}

Schedule make_explicit_schedule(const std::vector<uint64_t>& ks) {
    if (ks.empty()) throw config_error("explicit schedule needs at least k_0");
    Schedule s;
    s.kind = ScheduleKind::explicit_list;
    s.n_max = static_cast<int>(ks.size()) - 1;
    for (uint64_t k : ks) {
        if (k == 0) throw config_error("perplexities must be >= 1");
        s.exact_k.push_back(k <= s.exact_threshold ? std::optional<uint64_t>(k)
                                                   : std::nullopt);
        s.log_k.push_back(std::log(static_cast<double>(k)));
    }
    return s;
}

Schedule make_constant_schedule(uint64_t k, int n_max) {
    if (k == 0) throw config_error("perplexities must be >= 1");
    if (n_max < 0) throw config_error("n_max must be >= 0");
    Schedule s = make_explicit_schedule(std::vector<uint64_t>(n_max + 1, k));
    s.kind = ScheduleKind::constant;
    return s;
}

Schedule make_squaring_schedule(uint64_t k0, int n_max) {
    if (k0 == 0) throw config_error("perplexities must be >= 1");
    if (n_max < 0) throw config_error("n_max must be >= 0");
    Schedule s;
    s.kind = ScheduleKind::squaring;
    s.n_max = n_max;
    double ln_k0 = std::log(static_cast<double>(k0));
    if (std::ldexp(ln_k0, n_max) > std::numeric_limits<double>::max() / 2)
        throw config_error("squaring schedule overflows double exponent range");
    std::optional<uint64_t> k = k0;
    std::optional<unsigned __int128> w = k0;
    for (int n = 0; n <= n_max; ++n) {
        s.exact_k.push_back(k);
        s.wide_k.push_back(w);
        s.log_k.push_back(k ? std::log(static_cast<double>(*k)) : std::ldexp(ln_k0, n));
        k = square_if_small(k, s.exact_threshold);
        w = square_if_wide(w);
    }
    return s;
}

std::vector<ScheduleViolation> validate_schedule(const Schedule& s) {
    std::vector<ScheduleViolation> out;
    const double tol = 1e-9;
    for (int n = 1; n <= s.n_max; ++n) {
        const auto& prev = s.exact_k[static_cast<size_t>(n - 1)];
        const auto& cur = s.exact_k[static_cast<size_t>(n)];
        if (prev && cur) {
            unsigned __int128 sq = static_cast<unsigned __int128>(*prev) * *prev;
            if (*cur < *prev)
                out.push_back({n, ScheduleViolation::Side::below_previous});
            if (static_cast<unsigned __int128>(*cur) > sq)
                out.push_back({n, ScheduleViolation::Side::above_square});
        } else {
            double a = s.log_k[static_cast<size_t>(n - 1)];
            double b = s.log_k[static_cast<size_t>(n)];
            double eps = tol * std::max(1.0, std::abs(b));
            if (b < a - eps)
                out.push_back({n, ScheduleViolation::Side::below_previous});
            if (b > 2.0 * a + eps)
                out.push_back({n, ScheduleViolation::Side::above_square});
        }
    }
    return out;
}

void require_valid(const Schedule& s) {
    auto violations = validate_schedule(s);
    if (violations.empty()) return;
    std::ostringstream os;
    os << "invalid schedule " << s.spec_string() << ":";
    for (const auto& v : violations) os << " [" << v.describe() << "]";
    throw config_error(os.str());
}

EntropyRate combinatorial_entropy_rate(const Schedule& s) {
    EntropyRate r{};
    r.finite_range_min = std::numeric_limits<double>::infinity();
    r.argmin = 0;
    for (int n = 0; n <= s.n_max; ++n) {
        double v = std::ldexp(s.lnk(n), -n);
        if (v < r.finite_range_min) {
            r.finite_range_min = v;
            r.argmin = n;
        }
    }
    r.analytic_zero = (s.kind == ScheduleKind::hilberg);
    r.value = r.analytic_zero ? 0.0 : r.finite_range_min;
    return r;
}

} // namespace rha
