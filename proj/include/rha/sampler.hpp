#pragma once

#include "rha/rng.hpp"
#include "rha/schedule.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace rha {

using symbol = uint16_t;

// Pool-entry identity. Exact-index levels use the index value 1..k_n;
// levels with astronomic k_n use opaque 128-bit tags with the top bit set
// (indices never reach 2^127, so the spaces cannot collide).
using BlockId = unsigned __int128;

constexpr BlockId kTagBit = static_cast<BlockId>(1) << 127;

struct BlockIdHash {
    size_t operator()(BlockId v) const {
        return mix64(static_cast<uint64_t>(v >> 64) * 0x9e3779b97f4a7c15ULL ^
                     static_cast<uint64_t>(v));
    }
};

struct SymbolSequence {
    uint64_t alphabet_size = 1;
    std::vector<symbol> symbols;
    // provenance
    uint64_t seed = 0;
    std::string schedule_spec;

    size_t size() const { return symbols.size(); }
};

// The random grammar G, sampled on demand. Pair values are drawn on first
// access, uniformly among the pairs not yet used at that level; for a
// uniform random sorted combination read at exchangeable random indices
// this reproduces the joint law exactly (validated against enumerate_exact
// in the test suite). Three per-level regimes:
//   exact-pair:  k_{n-1} <= collision_mode_threshold — distinct pairs
//                guaranteed via a sparse Fisher-Yates deck over the
//                k_{n-1}^2 candidates (memory O(touched), not O(k^2)).
//   independent: larger exact k — components drawn independently as
//                uniform indices; duplicate-pair probability touched^2/k^2
//                joins the collision budget.
//   tag:         k beyond exact_threshold — components are fresh 128-bit
//                tags; the probability that honest indices would have
//                coincided joins the budget.
class LazyGrammar {
  public:
    LazyGrammar(const Schedule& s, SplitRng root,
                uint64_t collision_mode_threshold = uint64_t{1} << 32);

    const Schedule& schedule() const { return sched_; }

    // C_n, the uniform pool choice concatenated at step n (memoized).
    BlockId c_value(int n);

    // (L_{n,id}, R_{n,id}); idempotent per (level, id).
    std::pair<BlockId, BlockId> lazy_pair(int level, BlockId id);

    // Fresh uniform pool index at `level` from the given stream.
    BlockId draw_index(int level, SplitRng& stream);

    // K_{n,j}: the pool index of X^n_j (1-based j), via the recursion
    // K_{n,1} = C_n, K_{n,2j} = L_{n+1,K_{n+1,j}}, K_{n,2j+1} = R_{n+1,K_{n+1,j}}.
    BlockId k_index(int n, uint64_t j);

    // Depth-first expansion of Y^level_id, at most `budget` symbols.
    void expand(int level, BlockId id, size_t budget, std::vector<symbol>& out);

    // Accumulated probability that the independence shortcuts changed the
    // law relative to exact bookkeeping. Exceeding 2^-40 throws.
    double collision_budget() const { return pair_budget_ + index_budget_; }

    size_t touched(int level) const;

  private:
    BlockId draw_component(int child_level, BlockId parent, int side);
    void note_budget();

    const Schedule sched_;
    SplitRng root_;
    uint64_t collision_mode_threshold_;
    std::vector<std::unordered_map<BlockId, std::pair<BlockId, BlockId>, BlockIdHash>>
        assigned_;
    // sparse Fisher-Yates decks for exact-pair levels
    std::vector<std::unordered_map<uint64_t, uint64_t>> deck_;
    std::vector<uint64_t> deck_taken_;
    std::vector<SplitRng> deck_rng_;
    std::vector<std::unordered_set<uint64_t>> pair_seen_; // exact-pair distinctness assert
    std::vector<std::optional<BlockId>> c_;
    double pair_budget_ = 0.0;
    double index_budget_ = 0.0;
    std::vector<uint64_t> index_draws_;
};

// First N symbols of X = Y^0_{C0} x Y^1_{C1} x ...; deterministic in
// (schedule, N, seed). max_symbols is the memory budget; the accumulated
// collision budget is written through when requested.
SymbolSequence sample_prefix(const Schedule& s, size_t N, uint64_t seed,
                             size_t max_symbols = size_t{1} << 26,
                             double* collision_budget = nullptr);

// One draw of X^n_j = Y^n_K, K uniform on {1..k_n}, fresh grammar.
SymbolSequence sample_block(const Schedule& s, int n, uint64_t seed);

} // namespace rha
