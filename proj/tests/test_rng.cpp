#include <psched/rng.hpp>

#include <doctest.h>

#include <cmath>
#include <cstdint>

using namespace psched;

TEST_CASE("rng streams are deterministic and seed-sensitive") {
    Rng a(42), b(42), c(43);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t va = a.next_u64();
        all_equal = all_equal && va == b.next_u64();
        any_diff = any_diff || va != c.next_u64();
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("derive_seed depends on every path component") {
    const std::uint64_t base = derive_seed(7, {1, 2, 3});
    CHECK(base == derive_seed(7, {1, 2, 3}));
    CHECK(base != derive_seed(8, {1, 2, 3}));
    CHECK(base != derive_seed(7, {1, 2, 4}));
    CHECK(base != derive_seed(7, {1, 2}));
    CHECK(derive_seed(7, {2, 1}) != derive_seed(7, {1, 2}));
}

TEST_CASE("uniform_int covers the range without bias at the edges") {
    Rng rng(1);
    std::int64_t lo_hits = 0, hi_hits = 0;
    for (int i = 0; i < 60000; ++i) {
        const std::int64_t v = rng.uniform_int(3, 8);
        REQUIRE(v >= 3);
        REQUIRE(v <= 8);
        if (v == 3) ++lo_hits;
        if (v == 8) ++hi_hits;
    }
    // each value expects 10000 hits; 5 sigma ~ 460
    CHECK(std::abs(lo_hits - 10000) < 500);
    CHECK(std::abs(hi_hits - 10000) < 500);
    CHECK_THROWS_AS(rng.uniform_int(5, 4), std::invalid_argument);
}

TEST_CASE("poisson sampler matches mean and variance") {
    for (double lambda : {0.3, 4.0, 35.0, 120.0}) {
        PoissonSampler sampler(lambda);
        Rng rng(99);
        const int n = 200000;
        double sum = 0.0, sum_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = static_cast<double>(sampler.draw(rng));
            sum += v;
            sum_sq += v * v;
        }
        const double mean = sum / n;
        const double var = sum_sq / n - mean * mean;
        const double se_mean = std::sqrt(lambda / n);
        CHECK(std::abs(mean - lambda) < 5 * se_mean);
        CHECK(std::abs(var - lambda) < 0.05 * lambda + 0.1);
    }
}

TEST_CASE("poisson sampler matches exact point masses") {
    PoissonSampler sampler(0.5);
    Rng rng(7);
    const int n = 400000;
    int zeros = 0;
    for (int i = 0; i < n; ++i)
        if (sampler.draw(rng) == 0) ++zeros;
    const double p0 = std::exp(-0.5);  // 0.6065...
    CHECK(std::abs(static_cast<double>(zeros) / n - p0) < 0.005);
    CHECK_THROWS_AS(PoissonSampler(0.0), std::invalid_argument);
    CHECK_THROWS_AS(PoissonSampler(251.0), std::invalid_argument);
}

TEST_CASE("normal draws have the requested moments") {
    Rng rng(5);
    const int n = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = rng.normal(2.0, 0.5);
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / n;
    CHECK(std::abs(mean - 2.0) < 0.01);
    CHECK(std::abs(std::sqrt(sum_sq / n - mean * mean) - 0.5) < 0.01);
}
