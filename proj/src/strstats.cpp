#include "rha/strstats.hpp"

#include "rha/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

namespace rha {

namespace {

// SA-IS on a string whose last element is a unique smallest sentinel.
// Values lie in [0, K). Returns the suffix array including the sentinel.
std::vector<int32_t> sais(const std::vector<int32_t>& s, int32_t K) {
    const int32_t n = static_cast<int32_t>(s.size());
    std::vector<int32_t> sa(n, -1);
    if (n == 1) {
        sa[0] = 0;
        return sa;
    }
    std::vector<uint8_t> stype(n, 0); // 1 = S-type
    stype[n - 1] = 1;
    for (int32_t i = n - 2; i >= 0; --i)
        stype[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && stype[i + 1]);
    auto is_lms = [&](int32_t i) { return i > 0 && stype[i] && !stype[i - 1]; };

    std::vector<int32_t> bkt(K);
    auto bucket_bounds = [&](bool heads) {
        std::fill(bkt.begin(), bkt.end(), 0);
        for (int32_t c : s) ++bkt[c];
        int32_t sum = 0;
        for (int32_t c = 0; c < K; ++c) {
            int32_t t = bkt[c];
            bkt[c] = heads ? sum : sum + t;
            sum += t;
        }
    };
    auto induce = [&]() {
        bucket_bounds(true);
        for (int32_t i = 0; i < n; ++i) {
            int32_t j = sa[i] - 1;
            if (sa[i] > 0 && !stype[j]) sa[bkt[s[j]]++] = j;
        }
        bucket_bounds(false);
        for (int32_t i = n - 1; i >= 0; --i) {
            int32_t j = sa[i] - 1;
            if (sa[i] > 0 && stype[j]) sa[--bkt[s[j]]] = j;
        }
    };

    // round 1: LMS suffixes in arbitrary order at bucket tails, induce
    bucket_bounds(false);
    for (int32_t i = n - 1; i >= 1; --i)
        if (is_lms(i)) sa[--bkt[s[i]]] = i;
    induce();

    // name LMS substrings by their induced order
    std::vector<int32_t> lms;
    lms.reserve(n / 2 + 1);
    for (int32_t i = 1; i < n; ++i)
        if (is_lms(i)) lms.push_back(i);
    const int32_t m = static_cast<int32_t>(lms.size());
    std::vector<int32_t> name_of(n, -1);
    int32_t names = 0, prev = -1;
    for (int32_t i = 0; i < n; ++i) {
        int32_t pos = sa[i];
        if (pos <= 0 || !is_lms(pos)) continue;
        bool same = prev >= 0;
        for (int32_t d = 0; same; ++d) {
            if (s[prev + d] != s[pos + d] || stype[prev + d] != stype[pos + d]) {
                same = false;
                break;
            }
            bool end1 = d > 0 && is_lms(prev + d);
            bool end2 = d > 0 && is_lms(pos + d);
            if (end1 || end2) {
                same = end1 && end2;
                break;
            }
        }
        if (!same) ++names;
        prev = pos;
        name_of[pos] = names - 1;
    }

    std::vector<int32_t> s1(m);
    for (int32_t i = 0, w = 0; i < n; ++i)
        if (name_of[i] >= 0) s1[w++] = name_of[i];
    std::vector<int32_t> sa1;
    if (names < m) {
        sa1 = sais(s1, names);
    } else {
        sa1.assign(m, 0);
        for (int32_t i = 0; i < m; ++i) sa1[s1[i]] = i;
    }

    // round 2: LMS suffixes in true order, induce final SA
    std::fill(sa.begin(), sa.end(), -1);
    bucket_bounds(false);
    for (int32_t i = m - 1; i >= 0; --i) {
        int32_t pos = lms[sa1[i]];
        sa[--bkt[s[pos]]] = pos;
    }
    induce();
    return sa;
}

} // namespace

SuffixStructure build_suffix_structure(const std::vector<symbol>& x) {
    SuffixStructure st;
    const size_t n = x.size();
    if (n == 0) return st;
    if (n > (size_t{1} << 30))
        throw budget_error("sequence too long for 32-bit suffix indexing");
    std::vector<int32_t> s(n + 1);
    int32_t maxv = 0;
    for (size_t i = 0; i < n; ++i) {
        s[i] = static_cast<int32_t>(x[i]) + 1;
        maxv = std::max(maxv, s[i]);
    }
    s[n] = 0;
    std::vector<int32_t> sa = sais(s, maxv + 1);
    st.suffix_array.assign(sa.begin() + 1, sa.end()); // drop the sentinel suffix

    // Kasai
    st.lcp.assign(n > 1 ? n - 1 : 0, 0);
    std::vector<int32_t> rank(n);
    for (size_t i = 0; i < n; ++i) rank[st.suffix_array[i]] = static_cast<int32_t>(i);
    size_t h = 0;
    for (size_t i = 0; i < n; ++i) {
        if (rank[i] == 0) {
            h = 0;
            continue;
        }
        size_t j = static_cast<size_t>(st.suffix_array[rank[i] - 1]);
        while (i + h < n && j + h < n && x[i + h] == x[j + h]) ++h;
        st.lcp[rank[i] - 1] = static_cast<int32_t>(h);
        if (h > 0) --h;
    }
    return st;
}

double SubwordProfile::h_top(size_t m) const {
    return std::log(static_cast<double>(count(m)));
}

SubwordProfile subword_profile(const SuffixStructure& st, size_t n, size_t m_max) {
    if (m_max < 1 || m_max > n)
        throw config_error("subword_profile needs 1 <= m_max <= length");
    SubwordProfile p;
    p.sequence_length = n;
    // hist[v] = number of adjacent suffix pairs with lcp >= v via suffix sums
    std::vector<uint64_t> hist(m_max + 1, 0);
    for (int32_t v : st.lcp) ++hist[std::min<size_t>(v, m_max)];
    p.counts.resize(m_max);
    uint64_t ge = 0;
    std::vector<uint64_t> ge_m(m_max + 1, 0);
    for (size_t v = m_max; v >= 1; --v) {
        ge += hist[v];
        ge_m[v] = ge;
    }
    for (size_t m = 1; m <= m_max; ++m)
        p.counts[m - 1] = (n - m + 1) - ge_m[m];
    return p;
}

SubwordProfile subword_profile(const std::vector<symbol>& x, size_t m_max) {
    return subword_profile(build_suffix_structure(x), x.size(), m_max);
}

uint64_t maximal_repetition(const SuffixStructure& st) {
    int32_t best = 0;
    for (int32_t v : st.lcp) best = std::max(best, v);
    return static_cast<uint64_t>(best);
}

uint64_t maximal_repetition(const std::vector<symbol>& x) {
    if (x.size() <= 1) return 0;
    return maximal_repetition(build_suffix_structure(x));
}

DualityCheck check_duality(uint64_t count_m, uint64_t L, size_t N, size_t m) {
    // integer comparison: h_top(m) < ln(N-m+1) iff count_m < N-m+1
    DualityCheck d;
    d.implied_repeat = count_m < N - m + 1;
    d.consistent = !(d.implied_repeat && L < m);
    return d;
}

DualityCheck check_duality(const std::vector<symbol>& x, size_t m) {
    if (m < 1 || m > x.size())
        throw config_error("check_duality needs 1 <= m <= length");
    SuffixStructure st = build_suffix_structure(x);
    SubwordProfile p = subword_profile(st, x.size(), m);
    return check_duality(p.count(m), maximal_repetition(st), x.size(), m);
}

LZ78Parse lz78_parse(const std::vector<symbol>& x, uint64_t alphabet) {
    LZ78Parse out;
    if (alphabet < 1) throw config_error("alphabet must be at least 1");
    uint64_t sym_bits = alphabet == 1 ? 0 : std::bit_width(alphabet - 1);
    // trie over (node, symbol); node 0 is the empty root
    std::unordered_map<uint64_t, uint32_t> trie;
    trie.reserve(1 << 16);
    uint32_t next_node = 1;
    uint32_t node = 0;
    uint64_t phrase_len = 0;
    auto close_phrase = [&](bool extended) {
        uint64_t t = ++out.phrase_count;
        out.encoded_length_bits += (t == 1 ? 0 : std::bit_width(t - 1)) + sym_bits;
        out.max_phrase_length = std::max(out.max_phrase_length, phrase_len);
        (void)extended;
        node = 0;
        phrase_len = 0;
    };
    for (symbol c : x) {
        uint64_t key = (static_cast<uint64_t>(node) << 17) | (c + 1);
        ++phrase_len;
        auto it = trie.find(key);
        if (it != trie.end()) {
            node = it->second;
        } else {
            trie.emplace(key, next_node++);
            close_phrase(true);
        }
    }
    if (phrase_len > 0) close_phrase(false); // final phrase, possibly bare
    out.code_length_bound =
        out.phrase_count == 0
            ? 0.0
            : static_cast<double>(out.phrase_count) *
                  std::log(static_cast<double>(out.phrase_count));
    return out;
}

} // namespace rha
