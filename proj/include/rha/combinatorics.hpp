#pragma once

#include "rha/lognum.hpp"
#include "rha/schedule.hpp"

#include <cstdint>

namespace rha {

// Evaluated value of one of the paper's formulas/bounds.
//   - Probability reports (prob_no_repeat): value is the probability,
//     error_budget is ABSOLUTE (probabilities live on [0,1]).
//   - Entropy reports: value is in nats (as a LogNumber, since grammar
//     entropies overflow doubles at high levels), error_budget is RELATIVE.
struct BoundReport {
    LogNumber value;
    enum class Method { exact, asymptotic } method = Method::exact;
    double error_budget = 0.0;
    int arg_l = -1; // minimizing/maximizing level when applicable
};

// P(A_nm): X^n_1 consists of 2^{n-m} pairwise distinct level-m blocks.
// Exact telescoped product when every k_t (t in [m,n)) is exact and the
// term count fits the direct-summation cap; otherwise the proof's
// lower bound 1 - 2^n (k_m (2^{n-m+1}-3)+2)/(k_m^2 - 2^{n-m-1}+1) as a
// certified [lb, 1] bracket (value = lb, budget = 1 - lb).
BoundReport prob_no_repeat(const Schedule& s, int n, int m);

// H(G_{<=n}) = sum_{l=1..n} ln C(k_{l-1}^2, k_l), nats.
BoundReport grammar_entropy(const Schedule& s, int n);

// H(X^n_j) <= min_l [ H(G_{<=l}) + 2^{n-l} ln k_l ].
BoundReport block_entropy_upper(const Schedule& s, int n);

// H(X^n_j) >= max_l [ ln C(k_{l-1}^2,k_l) - ln C(k_{l-1}^2-2^{n-l}, k_l-2^{n-l}) ] P(A_nl)
// with C(., negative or over-range) treated as 1 (the counting argument
// degenerates to no constraint). Certified from below.
BoundReport block_entropy_lower(const Schedule& s, int n);

// H(X^n_j | G_{<=n}) = ln k_n.
double conditional_block_entropy(const Schedule& s, int n);

// (h/2, 2h) bracketing the Shannon entropy rate of the stationary mean.
struct Sandwich {
    double lower, upper;
    bool analytic_zero;
};
Sandwich entropy_rate_sandwich(const Schedule& s);

// 2 ln k_m: log of the pair-counting cap on distinct length-2^m windows
// (at most k_m^2 aligned block pairs). Windows at arbitrary offsets can
// add up to m ln 2 on top of this, so as a bound on measured H_top(2^m)
// the certified form is top_entropy_cap(s, m) + m ln 2.
double top_entropy_cap(const Schedule& s, int m);

// (m/(L+1)) ln(m/(L+1)): lower bound on LZ code length given repetition L.
double lz_ratio_floor(uint64_t measured_L, uint64_t m);

} // namespace rha
