#pragma once

#include "rha/sampler.hpp"

#include <cstdint>
#include <vector>

namespace rha {

struct SuffixStructure {
    std::vector<int32_t> suffix_array;
    std::vector<int32_t> lcp; // lcp[i] = lcp of suffixes ranked i, i+1
};

// SA-IS + Kasai; linear in the sequence length.
SuffixStructure build_suffix_structure(const std::vector<symbol>& x);

struct SubwordProfile {
    size_t sequence_length = 0;
    // counts[m-1] = number of distinct length-m substrings, 1 <= m <= m_max
    std::vector<uint64_t> counts;

    uint64_t count(size_t m) const { return counts.at(m - 1); }
    double h_top(size_t m) const; // ln count(m)
};

SubwordProfile subword_profile(const std::vector<symbol>& x, size_t m_max);
SubwordProfile subword_profile(const SuffixStructure& st, size_t n, size_t m_max);

// Longest length repeated at two distinct (possibly overlapping) positions.
uint64_t maximal_repetition(const std::vector<symbol>& x);
uint64_t maximal_repetition(const SuffixStructure& st);

struct DualityCheck {
    bool implied_repeat; // h_top(m) < ln(N - m + 1), i.e. some window repeats
    bool consistent;     // !(implied_repeat && L < m); always true if Thm. holds
};

DualityCheck check_duality(const std::vector<symbol>& x, size_t m);
// integer-exact form used for bulk scans
DualityCheck check_duality(uint64_t count_m, uint64_t L, size_t N, size_t m);

struct LZ78Parse {
    uint64_t phrase_count = 0;       // V
    double code_length_bound = 0.0;  // V ln V, nats
    uint64_t encoded_length_bits = 0;
    uint64_t max_phrase_length = 0;
};

// Incremental LZ78: each phrase extends the longest known phrase by one
// symbol; the final phrase may be a bare dictionary reference. Phrase t is
// coded as ceil(log2 t) pointer bits (dictionary held t-1 entries plus the
// empty phrase) + ceil(log2 alphabet) symbol bits, uniformly for all
// phrases including the final one.
LZ78Parse lz78_parse(const std::vector<symbol>& x, uint64_t alphabet);

} // namespace rha
