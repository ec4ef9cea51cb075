#pragma once

#include <cstdint>
#include <string_view>

namespace rha {

// splitmix64 output function (Steele, Lea, Flood 2014). Bijective on u64.
constexpr uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Counter-based splittable generator. A SplitRng is identified by a 64-bit
// key; the stream is mix64(key + i*PHI) for i = 1, 2, ...  Children derived
// via child() get statistically independent keys, so every (subcommand,
// realization, level, block) site can own its stream and lazy evaluation
// order cannot change any outcome. No libc/std distributions are used
// anywhere: output is identical across platforms and toolchains.
class SplitRng {
  public:
    explicit SplitRng(uint64_t key) : key_(key) {}

    uint64_t next() {
        ctr_ += 0x9e3779b97f4a7c15ULL;
        return mix64(key_ + ctr_);
    }

    // Derived generator; independent of how much this stream has advanced.
    SplitRng child(uint64_t tag) const {
        return SplitRng(mix64(mix64(key_ ^ 0x6a09e667f3bcc909ULL) + tag));
    }
    SplitRng child(std::string_view label) const { return child(fnv1a64(label)); }

    // Uniform on {0, ..., n-1}, unbiased via rejection sampling.
    uint64_t below(uint64_t n) {
        if (n <= 1) return 0;
        const uint64_t limit = ~uint64_t{0} - ~uint64_t{0} % n;
        uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % n;
    }

    // Uniform on {1, ..., n}.
    uint64_t between_1_and(uint64_t n) { return below(n) + 1; }

    // Uniform on [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    unsigned __int128 next128() {
        unsigned __int128 hi = next();
        return (hi << 64) | next();
    }

    uint64_t key() const { return key_; }

  private:
    uint64_t key_;
    uint64_t ctr_ = 0;
};

} // namespace rha
