#pragma once

#include <cstdint>

namespace flagcalc {

/// SplitMix64. Self-contained so that seeded runs produce identical streams
/// on every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform-ish value in [0, n). Modulo bias is irrelevant for test-data
    /// generation; do not use for anything statistical.
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

    /// Inclusive range.
    int range(int lo, int hi) {
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool flip() { return (next() & 1) != 0; }

    /// Nonzero value in [-bound, bound].
    int nonzero(int bound) {
        int v = range(1, bound);
        return flip() ? v : -v;
    }

private:
    std::uint64_t state_;
};

}  // namespace flagcalc
