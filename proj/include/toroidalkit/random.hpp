#pragma once

#include "toroidalkit/toroidal.hpp"

#include <cstdint>
#include <random>

namespace toroidalkit {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// std::mt19937_64 with bounded draws by rejection sampling, so sampled inputs depend only
// on the seed and not on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Independent stream for sample i of a run seeded with seed.
    static Rng for_sample(std::uint64_t seed, std::uint64_t i) { return Rng(splitmix64(seed ^ splitmix64(i + 1))); }

    std::uint64_t next() { return eng_(); }

    // Uniform integer in [lo, hi].
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(next());
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x;
        do x = next();
        while (x >= limit);
        return lo + static_cast<std::int64_t>(x % span);
    }
    int index(int n) { return static_cast<int>(uniform(0, n - 1)); }
    bool coin() { return uniform(0, 1) == 1; }

    // Nonzero rational p/q with |p| <= 5, 1 <= q <= 3.
    Rational small_rational() {
        std::int64_t p = 0;
        while (p == 0) p = uniform(-5, 5);
        return Rational(p, uniform(1, 3));
    }

    Degree degree(int n, int lo, int hi) {
        Degree d(n);
        for (int i = 0; i < n; ++i) d[i] = static_cast<int>(uniform(lo, hi));
        return d;
    }

private:
    std::mt19937_64 eng_;
};

inline Symbol random_symbol(const Toroidal& tau, Rng& rng, const Degree& m) {
    switch (rng.index(3)) {
        case 0:
            return Symbol::loop(rng.index(tau.g().dim()), m);
        case 1:
            return Symbol::kahler(rng.index(tau.n()), m);
        default:
            return Symbol::der(rng.index(tau.n()), m);
    }
}

// Homogeneous element of degree drawn from [lo, hi]^n with one to three terms.
inline AlgElement random_homogeneous(const Toroidal& tau, Rng& rng, int lo, int hi) {
    Degree m = rng.degree(tau.n(), lo, hi);
    AlgElement x;
    const int terms = static_cast<int>(rng.uniform(1, 3));
    for (int t = 0; t < terms; ++t) {
        Symbol s = random_symbol(tau, rng, m);
        if (s.kind == SymKind::Kahler)
            add_kahler(x, s.index, s.m, rng.small_rational());
        else
            x.add(s, rng.small_rational());
    }
    return x;
}

}  // namespace toroidalkit
