#include "rha/sampler.hpp"

#include "rha/errors.hpp"

#include <cassert>
#include <cmath>

namespace rha {

namespace {

constexpr double kBudgetCeiling = 0x1p-40;

uint64_t id_hi(BlockId v) { return static_cast<uint64_t>(v >> 64); }
uint64_t id_lo(BlockId v) { return static_cast<uint64_t>(v); }

} // namespace

LazyGrammar::LazyGrammar(const Schedule& s, SplitRng root,
                         uint64_t collision_mode_threshold)
    : sched_(s), root_(root), collision_mode_threshold_(collision_mode_threshold) {
    require_valid(sched_);
    if (sched_.has_exact(0) && sched_.k(0) > 65535)
        throw config_error("k_0 exceeds 65535; symbols are 16-bit");
    if (!sched_.has_exact(0))
        throw config_error("k_0 must be exactly representable");
    int L = sched_.levels();
    assigned_.resize(L + 1);
    deck_.resize(L + 1);
    deck_taken_.assign(L + 1, 0);
    pair_seen_.resize(L + 1);
    c_.resize(L + 1);
    index_draws_.assign(L + 1, 0);
    deck_rng_.reserve(L + 1);
    for (int l = 0; l <= L; ++l)
        deck_rng_.push_back(root_.child("fy").child(static_cast<uint64_t>(l)));
}

BlockId LazyGrammar::draw_index(int level, SplitRng& stream) {
    if (sched_.has_exact(level))
        return static_cast<BlockId>(stream.between_1_and(sched_.k(level)));
    if (sched_.has_exact128(level)) {
        // Pool size known exactly past 64 bits: an honest uniform draw,
        // so callers charge nothing. Rejection trims 2^128 mod k.
        unsigned __int128 k = sched_.k128(level);
        unsigned __int128 rem = (static_cast<unsigned __int128>(0) - k) % k;
        unsigned __int128 v = stream.next128();
        if (rem)
            while (v >= static_cast<unsigned __int128>(0) - rem)
                v = stream.next128();
        return static_cast<BlockId>(v % k + 1);
    }
    // Astronomic pool: a fresh tag stands in for an index that is fresh
    // with overwhelming probability; charged to the index budget by callers.
    return stream.next128() | kTagBit;
}

BlockId LazyGrammar::c_value(int n) {
    if (n < 0 || n > sched_.n_max)
        throw config_error("C_n requested beyond schedule range");
    if (!c_[n]) {
        SplitRng stream = root_.child("C").child(static_cast<uint64_t>(n));
        c_[n] = draw_index(n, stream);
        if (!sched_.has_exact128(n)) {
            uint64_t d = ++index_draws_[n];
            if (d > 1)
                index_budget_ += static_cast<double>(d - 1) * std::exp(-sched_.lnk(n));
            note_budget();
        }
    }
    return *c_[n];
}

BlockId LazyGrammar::draw_component(int child_level, BlockId parent, int side) {
    SplitRng stream = root_.child("pair")
                          .child(static_cast<uint64_t>(child_level + 1))
                          .child(id_hi(parent))
                          .child(id_lo(parent))
                          .child(static_cast<uint64_t>(side));
    BlockId v = draw_index(child_level, stream);
    if (!sched_.has_exact128(child_level)) {
        uint64_t d = ++index_draws_[child_level];
        if (d > 1)
            index_budget_ += static_cast<double>(d - 1) *
                             (std::exp(-sched_.lnk(child_level)) + 0x1p-127);
    }
    return v;
}

std::pair<BlockId, BlockId> LazyGrammar::lazy_pair(int level, BlockId id) {
    if (level < 1 || level > sched_.n_max)
        throw config_error("pair requested outside level range 1..n_max");
    auto& table = assigned_[level];
    auto it = table.find(id);
    if (it != table.end()) return it->second;

    std::pair<BlockId, BlockId> pr;
    uint64_t km1 = sched_.has_exact(level - 1) ? sched_.k(level - 1) : 0;
    bool exact_pairs = km1 != 0 && km1 <= collision_mode_threshold_;
    if (exact_pairs) {
        // Uniform draw without replacement from the k_{n-1}^2 candidate
        // pairs: sparse Fisher-Yates over v = (L-1)*k + (R-1). M can be
        // exactly 2^64 (km1 = 2^32); only the t = 0 draw needs care then.
        unsigned __int128 M =
            static_cast<unsigned __int128>(km1) * km1;
        uint64_t t = deck_taken_[level]++;
        if (static_cast<unsigned __int128>(t) >= M)
            throw invariant_error("pair pool exhausted at level " + std::to_string(level));
        unsigned __int128 span = M - t;
        uint64_t r = t + (span > UINT64_MAX ? deck_rng_[level].next()
                                            : deck_rng_[level].below(static_cast<uint64_t>(span)));
        auto& deck = deck_[level];
        auto get = [&](uint64_t pos) {
            auto d = deck.find(pos);
            return d == deck.end() ? pos : d->second;
        };
        uint64_t val = get(r);
        if (r != t) deck[r] = get(t);
        deck.erase(t);
        if (!pair_seen_[level].insert(val).second)
            throw invariant_error("duplicate pair assigned at level " +
                                  std::to_string(level));
        pr = {static_cast<BlockId>(val / km1 + 1), static_cast<BlockId>(val % km1 + 1)};
    } else {
        pr = {draw_component(level - 1, id, 0), draw_component(level - 1, id, 1)};
        size_t T = table.size() + 1;
        pair_budget_ +=
            static_cast<double>(T - 1) * std::exp(-2.0 * sched_.lnk(level - 1));
    }
    table.emplace(id, pr);
    note_budget();
    return pr;
}

void LazyGrammar::note_budget() {
    if (pair_budget_ + index_budget_ > kBudgetCeiling)
        throw budget_error("collision budget exceeded 2^-40 (pair " +
                           std::to_string(pair_budget_) + ", index " +
                           std::to_string(index_budget_) +
                           "); the sampled law is no longer trustworthy");
}

BlockId LazyGrammar::k_index(int n, uint64_t j) {
    if (j == 0) throw config_error("block positions are 1-based");
    if (n < 0) throw config_error("negative level in k_index");
    if (j == 1) return c_value(n);
    if (n + 1 > sched_.n_max)
        throw config_error("k_index recursion leaves the schedule; extend n_max");
    BlockId parent = k_index(n + 1, j / 2);
    auto pr = lazy_pair(n + 1, parent);
    return (j % 2 == 0) ? pr.first : pr.second;
}

void LazyGrammar::expand(int level, BlockId id, size_t budget,
                         std::vector<symbol>& out) {
    std::vector<std::pair<int, BlockId>> stack;
    stack.emplace_back(level, id);
    while (!stack.empty() && budget > 0) {
        auto [l, v] = stack.back();
        stack.pop_back();
        if (l == 0) {
            out.push_back(static_cast<symbol>(static_cast<uint64_t>(v)));
            --budget;
            continue;
        }
        auto pr = lazy_pair(l, v);
        stack.emplace_back(l - 1, pr.second);
        stack.emplace_back(l - 1, pr.first);
    }
}

size_t LazyGrammar::touched(int level) const {
    return level >= 0 && level < static_cast<int>(assigned_.size())
               ? assigned_[level].size()
               : 0;
}

SymbolSequence sample_prefix(const Schedule& s, size_t N, uint64_t seed,
                             size_t max_symbols, double* collision_budget) {
    if (N > max_symbols)
        throw budget_error("prefix length " + std::to_string(N) +
                           " exceeds the memory budget of " +
                           std::to_string(max_symbols) + " symbols");
    int L = s.levels();
    // Y^0 x ... x Y^{n_max} covers 2^L - 1 symbols (L = n_max+1 levels).
    if (L < 64 && N > (uint64_t{1} << L) - 1)
        throw config_error("prefix of length " + std::to_string(N) +
                           " needs levels beyond n_max=" +
                           std::to_string(s.n_max));
    LazyGrammar g(s, SplitRng(seed).child("rha"));
    SymbolSequence seq;
    seq.alphabet_size = s.alphabet();
    seq.seed = seed;
    seq.schedule_spec = s.spec_string();
    seq.symbols.reserve(N);
    for (int m = 0; seq.symbols.size() < N; ++m)
        g.expand(m, g.c_value(m), N - seq.symbols.size(), seq.symbols);
    if (collision_budget) *collision_budget = g.collision_budget();
    return seq;
}

SymbolSequence sample_block(const Schedule& s, int n, uint64_t seed) {
    if (n < 0 || n > s.n_max)
        throw config_error("block level outside schedule range");
    if (n >= 27)
        throw budget_error("2^n symbols exceed the memory budget");
    LazyGrammar g(s, SplitRng(seed).child("blk"));
    SplitRng kstream = SplitRng(seed).child("blk").child("K");
    BlockId K = g.draw_index(n, kstream);
    SymbolSequence seq;
    seq.alphabet_size = s.alphabet();
    seq.seed = seed;
    seq.schedule_spec = s.spec_string();
    seq.symbols.reserve(size_t{1} << n);
    g.expand(n, K, size_t{1} << n, seq.symbols);
    return seq;
}

} // namespace rha
