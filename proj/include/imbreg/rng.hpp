#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "imbreg/error.hpp"

namespace imbreg {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent streams from (seed, index).
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
    return Rng(mix_seed(seed, stream));
}

// Uniform in [0, 1).
inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline double uniform_in(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

inline double normal(Rng& rng, double mean = 0.0, double sd = 1.0) {
    return std::normal_distribution<double>(mean, sd)(rng);
}

// Uniform index in [0, n).
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

// Draw an index with probability proportional to weights[i]. Weights must be
// nonnegative with a positive sum.
inline std::size_t weighted_index(Rng& rng, std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0))
        throw Error(ErrorKind::degenerate, "weighted draw: total weight is zero");
    double u = uniform01(rng) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.size() - 1;
}

// Sequential weighted draws without replacement. Stops early if all remaining
// weight is zero; returns the drawn indices in draw order.
inline std::vector<std::size_t> weighted_sample_without_replacement(
    Rng& rng, std::vector<double> weights, std::size_t count) {
    std::vector<std::size_t> drawn;
    drawn.reserve(count);
    for (std::size_t c = 0; c < count; ++c) {
        double total = 0.0;
        for (double w : weights) total += w;
        if (!(total > 0.0)) break;
        std::size_t idx = weighted_index(rng, weights);
        drawn.push_back(idx);
        weights[idx] = 0.0;
    }
    return drawn;
}

// Fisher-Yates draw of `count` distinct indices from [0, n).
inline std::vector<std::size_t> sample_indices_without_replacement(
    Rng& rng, std::size_t n, std::size_t count) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    if (count > n) count = n;
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t j = i + uniform_index(rng, n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
}

template <typename T>
inline void shuffle_in_place(Rng& rng, std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::size_t j = uniform_index(rng, i);
        std::swap(values[i - 1], values[j]);
    }
}

}  // namespace imbreg
