#include "rha/enumerate.hpp"

#include "rha/errors.hpp"

#include <numeric>
#include <string>

namespace rha {

namespace {

// C(M, r) capped: returns cap+1 as soon as the exact value exceeds cap.
uint64_t choose_capped(uint64_t M, uint64_t r, uint64_t cap) {
    if (r > M) return 0;
    if (r > M - r) r = M - r;
    unsigned __int128 c = 1;
    for (uint64_t i = 0; i < r; ++i) {
        c = c * (M - i) / (i + 1); // running product stays divisible
        if (c > cap) return cap + 1;
    }
    return static_cast<uint64_t>(c);
}

bool next_combination(std::vector<uint64_t>& idx, uint64_t M) {
    size_t k = idx.size();
    for (size_t i = k; i-- > 0;) {
        if (idx[i] < M - k + i) {
            ++idx[i];
            for (size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

} // namespace

std::vector<symbol> EnumeratedGrammar::block_string(int level, uint64_t id) const {
    std::vector<symbol> out;
    out.reserve(size_t{1} << level);
    std::vector<std::pair<int, uint64_t>> stack{{level, id}};
    while (!stack.empty()) {
        auto [l, v] = stack.back();
        stack.pop_back();
        if (l == 0) {
            out.push_back(static_cast<symbol>(v));
            continue;
        }
        auto pr = pools[l][v - 1];
        stack.emplace_back(l - 1, pr.second);
        stack.emplace_back(l - 1, pr.first);
    }
    return out;
}

std::vector<symbol> EnumeratedGrammar::prefix_string(size_t N) const {
    std::vector<symbol> out;
    out.reserve(N);
    for (int l = 0; out.size() < N; ++l) {
        if (l >= static_cast<int>(c.size()))
            throw config_error("enumerated prefix needs levels beyond n_max");
        auto blk = block_string(l, c[l]);
        for (symbol s : blk) {
            if (out.size() == N) break;
            out.push_back(s);
        }
    }
    return out;
}

uint64_t EnumeratedGrammar::k_value(int n, uint64_t j) const {
    if (j == 0) throw config_error("block positions are 1-based");
    if (j == 1) {
        if (n >= static_cast<int>(c.size()))
            throw config_error("k_value needs levels beyond n_max");
        return c[n];
    }
    uint64_t parent = k_value(n + 1, j / 2);
    auto pr = pools[n + 1][parent - 1];
    return (j % 2 == 0) ? pr.first : pr.second;
}

std::vector<uint64_t> EnumeratedGrammar::sub_ids(int level, uint64_t id, int m) const {
    std::vector<uint64_t> out;
    std::vector<std::pair<int, uint64_t>> stack{{level, id}};
    while (!stack.empty()) {
        auto [l, v] = stack.back();
        stack.pop_back();
        if (l == m) {
            out.push_back(v);
            continue;
        }
        auto pr = pools[l][v - 1];
        stack.emplace_back(l - 1, pr.second);
        stack.emplace_back(l - 1, pr.first);
    }
    return out;
}

uint64_t enumerate_exact(
    const Schedule& s,
    const std::function<void(const EnumeratedGrammar&, double)>& visit,
    EnumOptions opt) {
    int L = s.n_max;
    for (int l = 0; l <= L; ++l)
        if (!s.has_exact(l))
            throw config_error("enumerate_exact needs exact perplexities at all levels");
    require_valid(s);

    uint64_t cap = static_cast<uint64_t>(opt.budget);
    int pool_end = std::min(L, opt.pool_hi);
    unsigned __int128 total = 1;
    for (int l = std::max(1, opt.pool_lo); l <= pool_end; ++l) {
        uint64_t km1 = s.k(l - 1);
        if (km1 > (uint64_t{1} << 31))
            throw budget_error("pair universe too large to enumerate");
        uint64_t cnt = choose_capped(km1 * km1, s.k(l), cap);
        total *= cnt;
        if (total > cap)
            throw budget_error("enumeration outcome count exceeds budget " +
                               std::to_string(cap));
    }
    int c_end = std::min(L, opt.c_hi);
    for (int l = std::max(0, opt.c_lo); l <= c_end; ++l) {
        total *= s.k(l);
        if (total > cap)
            throw budget_error("enumeration outcome count exceeds budget " +
                               std::to_string(cap));
    }
    uint64_t total_u = static_cast<uint64_t>(total);
    double prob = 1.0 / static_cast<double>(total_u);

    EnumeratedGrammar g;
    g.sched = &s;
    g.pools.resize(L + 1);
    g.c.assign(L + 1, 1);
    auto fill_pool = [&](int l, const std::vector<uint64_t>& idx) {
        uint64_t km1 = s.k(l - 1);
        auto& pool = g.pools[l];
        pool.resize(idx.size());
        for (size_t i = 0; i < idx.size(); ++i)
            pool[i] = {idx[i] / km1 + 1, idx[i] % km1 + 1};
    };
    // fixed first combinations for every level (the enumerated ones are
    // overwritten below; the ones before pool_lo keep this assignment)
    for (int l = 1; l <= L; ++l) {
        std::vector<uint64_t> first(s.k(l));
        std::iota(first.begin(), first.end(), 0);
        fill_pool(l, first);
    }

    uint64_t visited = 0;
    std::function<void(int)> over_c = [&](int l) {
        if (l > c_end) {
            visit(g, prob);
            ++visited;
            return;
        }
        for (uint64_t v = 1; v <= s.k(l); ++v) {
            g.c[l] = v;
            over_c(l + 1);
        }
    };
    int c_start = std::max(0, opt.c_lo);
    std::function<void(int)> over_pools = [&](int l) {
        if (l > pool_end) {
            over_c(c_start);
            return;
        }
        uint64_t km1 = s.k(l - 1);
        std::vector<uint64_t> idx(s.k(l));
        std::iota(idx.begin(), idx.end(), 0);
        do {
            fill_pool(l, idx);
            over_pools(l + 1);
        } while (next_combination(idx, km1 * km1));
    };
    over_pools(std::max(1, opt.pool_lo));
    if (visited != total_u)
        throw invariant_error("enumeration visited " + std::to_string(visited) +
                              " outcomes, expected " + std::to_string(total_u));
    return total_u;
}

} // namespace rha
