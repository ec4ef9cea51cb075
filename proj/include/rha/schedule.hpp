#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rha {

enum class ScheduleKind { hilberg, explicit_list, constant, squaring };

// One failed instance of k_{n-1} <= k_n <= k_{n-1}^2.
struct ScheduleViolation {
    int level;
    enum class Side { below_previous, above_square } side;
    std::string describe() const;
};

// Perplexity sequence k_0, ..., k_{n_max}, carried as natural logs plus
// exact integers wherever k_n <= exact_threshold. All downstream formulas
// read lnk()/k(); nothing else ever recomputes the schedule.
struct Schedule {
    ScheduleKind kind = ScheduleKind::explicit_list;
    double beta = 0.0; // hilberg only
    int n_max = 0;
    uint64_t exact_threshold = uint64_t{1} << 62;
    std::vector<double> log_k;                   // log_k[n] = ln k_n
    std::vector<std::optional<uint64_t>> exact_k;
    // Squaring chains keep exact values past exact_threshold, up to 2^126
    // (the two top bits stay clear of the sampler's tag namespace). Only
    // index draws consume these; every formula still reads lnk()/k().
    std::vector<std::optional<unsigned __int128>> wide_k;

    int levels() const { return n_max + 1; }
    double lnk(int n) const;
    bool has_exact(int n) const;
    uint64_t k(int n) const; // throws invariant_error when log-domain only
    // Exactness including the wide continuation; falls back to exact_k.
    bool has_exact128(int n) const;
    unsigned __int128 k128(int n) const;

    // Alphabet size k_0 (always exact; constructors enforce k_0 <= 2^62).
    uint64_t alphabet() const { return k(0); }

    // Canonical config-file spelling, e.g. "hilberg(beta=0.5,n_max=24)".
    std::string spec_string() const;

    // Same schedule with `extra` levels appended via k_{n+1} = k_n^2 (the
    // boundary case of LogSubadditivity, so the extension always validates).
    // Used when an oracle has to reach grammar levels above n_max.
    Schedule extended_squaring(int extra) const;
};

Schedule make_hilberg_schedule(double beta, int n_max,
                               uint64_t exact_threshold = uint64_t{1} << 62);
Schedule make_explicit_schedule(const std::vector<uint64_t>& ks);
Schedule make_constant_schedule(uint64_t k, int n_max);
// k_n = k0^(2^n); the positive-entropy-rate contrast family.
Schedule make_squaring_schedule(uint64_t k0, int n_max);

// Total function: reports every level where LogSubadditivity fails.
std::vector<ScheduleViolation> validate_schedule(const Schedule& s);
// Convenience: throws config_error listing all violations.
void require_valid(const Schedule& s);

struct EntropyRate {
    double value;        // nats per symbol
    bool analytic_zero;  // hilberg kind: 2^{-n} ln k_n -> 0 exactly
    double finite_range_min; // min over materialized levels of 2^{-n} ln k_n
    int argmin;
};

EntropyRate combinatorial_entropy_rate(const Schedule& s);

} // namespace rha
