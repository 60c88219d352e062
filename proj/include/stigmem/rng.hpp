#pragma once
// Deterministic splitmix64 stream with label-keyed substreams.
//
// The <random> distributions are implementation-defined, so every draw in the
// simulator goes through this class to keep runs reproducible across
// toolchains. Substreams let independent concerns (world layout, spawn sites,
// trait sampling, the run itself, perturbations) consume randomness without
// shifting each other's draw positions.

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace stigmem {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Derive the seed of a named substream of `seed`.
    static std::uint64_t derive(std::uint64_t seed, std::string_view label) {
        return mix(seed ^ fnv1a(label));
    }

    static Rng substream(std::uint64_t seed, std::string_view label) {
        return Rng(derive(seed, label));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1).
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n); n must be >= 1.
    std::uint64_t uniform_below(std::uint64_t n) {
        return std::uint64_t((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        return lo + int(uniform_below(std::uint64_t(hi - lo) + 1));
    }

    // Fisher-Yates shuffle.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = std::size_t(uniform_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Shuffle only the first k slots (partial Fisher-Yates); the prefix is a
    // uniform sample without replacement.
    template <class T>
    void partial_shuffle(std::vector<T>& v, std::size_t k) {
        const std::size_t n = v.size();
        if (k > n) k = n;
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + std::size_t(uniform_below(n - i));
            std::swap(v[i], v[j]);
        }
    }

private:
    static std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        return h;
    }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace stigmem
