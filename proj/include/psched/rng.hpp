#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace psched {

/// Finalizing mixer from splitmix64; used for seed expansion and stream derivation.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derive an independent sub-seed from a master seed and a path of identifiers
/// (combination index, repetition index, purpose tag, ...). Independent of call
/// order and of any thread schedule.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = mix64(master ^ 0x9e3779b97f4a7c15ULL);
    for (std::uint64_t v : path) {
        s += 0x9e3779b97f4a7c15ULL * (v + 1);
        s = mix64(s);
    }
    return s;
}

/// xoshiro256** with splitmix64 seeding. Deterministic for a fixed seed;
/// every distribution in the project draws from this engine only.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 1) {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            sm += 0x9e3779b97f4a7c15ULL;
            word = mix64(sm);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; safe as a log() argument.
    double next_double_open() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    /// Unbiased uniform integer in [0, n); Lemire's multiply-shift with rejection.
    std::uint64_t next_below(std::uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
        return lo + static_cast<std::int64_t>(next_below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    /// Uniform real in [lo, hi).
    double uniform_real(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Standard normal via Box-Muller; consumes exactly two uniforms per call.
    double normal() {
        const double u1 = next_double_open();
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4]{};
};

/// Exact Poisson sampling by inversion of a precomputed CDF table.
/// The pmf is built from the recurrence p_{k+1} = p_k * lambda / (k+1), which is
/// exact in double precision for lambda <= 250 (p_0 = e^-lambda stays normal).
class PoissonSampler {
public:
    explicit PoissonSampler(double lambda) : lambda_(lambda) {
        if (!(lambda > 0.0) || lambda > 250.0)
            throw std::invalid_argument("PoissonSampler: lambda must be in (0, 250]");
        double pmf = std::exp(-lambda);
        double cdf = pmf;
        cdf_.push_back(cdf);
        // extend until the remaining tail mass is below 1e-18
        for (std::uint64_t k = 1; cdf < 1.0 - 1e-18 && k < 4096; ++k) {
            pmf *= lambda / static_cast<double>(k);
            cdf += pmf;
            cdf_.push_back(cdf);
        }
    }

    std::int64_t draw(Rng& rng) const {
        const double u = rng.next_double();
        // binary search for the smallest k with cdf[k] > u
        std::size_t lo = 0, hi = cdf_.size();
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cdf_[mid] > u)
                hi = mid;
            else
                lo = mid + 1;
        }
        return static_cast<std::int64_t>(lo < cdf_.size() ? lo : cdf_.size() - 1);
    }

    double lambda() const { return lambda_; }

private:
    double lambda_;
    std::vector<double> cdf_;
};

}  // namespace psched
