#pragma once

#include <cstdint>
#include <cmath>
#include <random>
#include <vector>

namespace otriage {

// Deterministic random stream. Wraps mt19937_64 but derives all values through
// fixed arithmetic instead of std::*_distribution, whose output is
// implementation-defined and would break byte-identical dataset generation
// across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform(std::uint64_t n) { return next_u64() % n; }

    // Uniform integer in [lo, hi], inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(uniform(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Uniform double in [0, 1).
    double uniform_real() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool chance(double p) { return uniform_real() < p; }

    // Exponential with the given mean (mean <= 0 yields 0).
    double exponential(double mean) {
        if (mean <= 0.0) return 0.0;
        return -mean * std::log1p(-uniform_real());
    }

    // Derive an independent child stream; used so parallel units of work
    // (per-class training, per-outage generation) stay order-independent.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace otriage
