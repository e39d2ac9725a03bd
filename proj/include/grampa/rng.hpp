#pragma once

// Seeded, splittable random streams.

#include "grampa/core.hpp"

#include <cstdint>
#include <random>

namespace grampa {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Order-sensitive combination of two 64-bit words.
inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) ^ (b + 0x632be59bd9b4e019ULL + (a << 6) + (a >> 2)));
}

/// (master, stream) identifies one independent random stream.
struct Seed {
    std::uint64_t master = 0;
    std::uint64_t stream = 0;

    /// Child stream, e.g. one per generated graph inside a repetition.
    Seed child(std::uint64_t tag) const { return {master, hash_combine(stream, tag)}; }

    std::uint64_t key() const { return hash_combine(master, stream); }
};

class Rng {
public:
    explicit Rng(const Seed& seed) : engine_(seed.key()) {}

    double normal(double stddev) { return std::normal_distribution<double>(0.0, stddev)(engine_); }
    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return std::uniform_real_distribution<double>(0.0, 1.0)(engine_) < p;
    }
    Index uniform_index(Index bound) {  // in [0, bound)
        return std::uniform_int_distribution<Index>(0, bound - 1)(engine_);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// Uniformly random permutation by Fisher-Yates.
inline Permutation random_permutation(Index n, Rng& rng) {
    std::vector<Index> map(static_cast<std::size_t>(n));
    std::iota(map.begin(), map.end(), Index{0});
    for (Index i = n - 1; i > 0; --i) std::swap(map[i], map[rng.uniform_index(i + 1)]);
    return Permutation(std::move(map));
}

}  // namespace grampa
