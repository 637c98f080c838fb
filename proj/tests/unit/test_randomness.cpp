#include "alphahash/randomness.hpp"

#include "stats.hpp"

#include <catch_amalgamated.hpp>

#include <map>

using namespace alphahash;
using alphahash::testing::chi_square_p_value;

TEST_CASE("eval_hash is deterministic and in range", "[randomness]")
{
    const SharedSeed seed{123, 456};
    for (std::uint64_t t = 1; t <= 100; ++t) {
        for (std::uint64_t key = 1; key <= 20; ++key) {
            const auto v = eval_hash(seed, t, key, 7);
            CHECK(v == eval_hash(seed, t, key, 7));
            CHECK(v >= 1);
            CHECK(v <= 7);
            CHECK(eval_hash(seed, t, key, 1) == 1);
        }
    }
}

TEST_CASE("eval_hash argument checks", "[randomness]")
{
    const SharedSeed seed{1, 2};
    CHECK_THROWS_AS(eval_hash(seed, 0, 1, 4), std::out_of_range);
    CHECK_THROWS_AS(eval_hash(seed, 1, 0, 4), std::out_of_range);
    CHECK_THROWS_AS(eval_hash(seed, 1, 1, 0), std::out_of_range);
    CHECK_THROWS_AS(arrival_time(5, 0), std::out_of_range);
}

TEST_CASE("eval_hash agrees with the documented derivation", "[randomness]")
{
    const SharedSeed seed{0xDEADBEEF, 0};
    const std::uint64_t key = 99;
    const std::uint64_t state = mix64(mix64(seed.z_seed ^ kHashDomain) + key * kKeyStep);
    for (std::uint64_t t = 1; t <= 50; ++t) {
        CHECK(eval_hash(seed, t, key, 8) == (mix64(state + t * kGolden) & 7U) + 1);
        CHECK(eval_hash(seed, t, key, 12) == eval_from_state(state, t, 12));
    }
}

TEST_CASE("eval_hash passes chi-square uniformity", "[randomness][statistical]")
{
    const std::uint32_t k = GENERATE(2U, 8U, 64U);
    const SharedSeed seed{0xA5A5, 0x5A5A};
    const std::size_t draws = 100'000;
    std::vector<double> observed(k, 0.0);
    std::size_t i = 0;
    for (std::uint64_t t = 1; i < draws; ++t) {
        for (std::uint64_t key = 1; key <= 10 && i < draws; ++key, ++i) {
            observed[eval_hash(seed, t, key, k) - 1] += 1.0;
        }
    }
    const std::vector<double> expected(k, static_cast<double>(draws) / k);
    INFO("k = " << k);
    CHECK(chi_square_p_value(observed, expected) > 0.001);
    if (k == 8) {
        // Each frequency within 3 standard errors of 1/8.
        const double p = 1.0 / 8.0;
        const double se = std::sqrt(p * (1 - p) / draws);
        for (double o : observed) {
            CHECK(std::abs(o / draws - p) <= 3.0 * se + 1e-12);
        }
    }
}

TEST_CASE("restriction matches eval_hash and is uniform at k=3", "[randomness][statistical]")
{
    const SharedSeed seed{77, 78};
    const KeySet a(1000, {5, 500, 999});
    CHECK(restriction(seed, 1, KeySet(10, {4})) == RestrictionVector{1});
    for (std::uint64_t t = 1; t <= 20; ++t) {
        const auto x = restriction(seed, t, a);
        CHECK(x == restriction(seed, t, a));
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(x[i] == eval_hash(seed, t, a[i], 3));
        }
    }
    std::map<RestrictionVector, double> counts;
    const std::size_t n = 100'000;
    for (std::uint64_t t = 1; t <= n; ++t) {
        counts[restriction(seed, t, a)] += 1.0;
    }
    CHECK(counts.size() == 27);
    double tv = 0.0;
    for (const auto& [x, c] : counts) {
        tv += std::abs(c / n - 1.0 / 27.0);
    }
    tv += (27.0 - static_cast<double>(counts.size())) / 27.0;
    CHECK(tv / 2.0 <= 0.02);
}

TEST_CASE("arrival times are increasing and reproducible", "[randomness]")
{
    for (std::uint64_t u = 0; u < 200; ++u) {
        ArrivalStream s(u);
        double prev = 0.0;
        for (std::uint64_t t = 1; t <= 20; ++t) {
            const double now = s.next();
            CHECK(now > prev);
            CHECK(now == arrival_time(u, t));
            prev = now;
        }
        CHECK(s.emitted() == 20);
    }
}

TEST_CASE("arrival increments are unit exponentials", "[randomness][statistical]")
{
    const std::size_t seeds = 10'000;
    double sum_t10 = 0.0;
    double inc_sum = 0.0;
    double inc_sq = 0.0;
    std::size_t incs = 0;
    for (std::uint64_t u = 1; u <= seeds; ++u) {
        sum_t10 += arrival_time(u * 0x9E37ULL, 10) / 10.0;
        ArrivalStream s(u);
        for (std::uint64_t t = 1; t <= 10; ++t) {
            const double e = s.increment(t);
            inc_sum += e;
            inc_sq += e * e;
            ++incs;
        }
    }
    CHECK(std::abs(sum_t10 / seeds - 1.0) <= 0.03);
    const double mean = inc_sum / incs;
    const double var = inc_sq / incs - mean * mean;
    CHECK(std::abs(mean - 1.0) <= 0.03);
    CHECK(std::abs(var - 1.0) <= 0.06);
}

TEST_CASE("shared seed split is deterministic", "[randomness]")
{
    CHECK(SharedSeed::from_u64(5) == SharedSeed::from_u64(5));
    CHECK_FALSE(SharedSeed::from_u64(5) == SharedSeed::from_u64(6));
    const auto s = SharedSeed::from_u64(0);
    CHECK(s.z_seed != s.u_seed);
}

TEST_CASE("uniform_below is unbiased on small ranges", "[randomness][statistical]")
{
    SplitMix64 rng(9);
    std::vector<double> observed(6, 0.0);
    for (int i = 0; i < 60'000; ++i) {
        observed[uniform_below(rng, 6)] += 1.0;
    }
    CHECK(chi_square_p_value(observed, std::vector<double>(6, 10'000.0)) > 0.001);
    CHECK_THROWS_AS(uniform_below(rng, 0), std::invalid_argument);
}
