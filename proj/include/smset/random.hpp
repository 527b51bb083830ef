#pragma once

#include "smset/rational.hpp"

#include <cstdint>

namespace smset {

/// Deterministic generator (splitmix64 core). Sequences depend only on the
/// seed, never on the platform or the standard library, so suite output is
/// reproducible byte for byte.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

    long int_in(long lo, long hi) { // inclusive
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool chance(unsigned num, unsigned den) { return below(den) < num; }

    Rational small_rational(long max_abs = 4, long max_den = 3) {
        long num = int_in(-max_abs, max_abs);
        long den = int_in(1, max_den);
        return rat(num, den);
    }

    Rational small_nonzero_rational(long max_abs = 4, long max_den = 3) {
        Rational q = small_rational(max_abs, max_den);
        if (rat_is_zero(q)) q = Rational(1);
        return q;
    }
};

/// Independent stream per sample index: results do not depend on scheduling.
inline Rng sample_rng(std::uint64_t seed, std::uint64_t index) {
    Rng mix(seed);
    mix.state ^= 0x517cc1b727220a95ULL * (index + 1);
    mix.next();
    return mix;
}

} // namespace smset
