#include "alphahash/harness.hpp"
#include "alphahash/oracle.hpp"
#include "alphahash/schemes.hpp"

#include "stats.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <set>

using namespace alphahash;
using Catch::Approx;

namespace {

SharedSeed seed_for(std::uint64_t i)
{
    return SharedSeed{prf(i, 0x5eed, 1), prf(i, 0x5eed, 2)};
}

// Enumerates [k]^k in lexicographic order.
std::vector<RestrictionVector> all_vectors(std::size_t k)
{
    std::vector<RestrictionVector> out;
    std::vector<std::uint32_t> v(k, 1);
    while (true) {
        out.emplace_back(v);
        std::size_t i = k;
        while (i > 0 && v[i - 1] == k) {
            v[--i] = 1;
        }
        if (i == 0) {
            return out;
        }
        ++v[i - 1];
    }
}

}  // namespace

TEST_CASE("lambda_for_alpha", "[schemes]")
{
    CHECK(lambda_for_alpha(1.0) == 1.0);
    CHECK(lambda_for_alpha(1.0 / std::numbers::e) == Approx(0.0).margin(1e-15));
    CHECK(lambda_for_alpha(0.2) == 0.0);
    CHECK(lambda_for_alpha(0.5) == Approx(0.209012).margin(1e-6));
    CHECK(lambda_for_alpha(0.9) == Approx(0.841802).margin(1e-6));
    CHECK_THROWS_AS(lambda_for_alpha(1.1), std::invalid_argument);
}

TEST_CASE("perfect scheme", "[schemes]")
{
    const auto code = IntegerCode::elias_delta();
    SECTION("k=1 always takes the first function")
    {
        const KeySet a(100, {42});
        for (std::uint64_t i = 0; i < 100; ++i) {
            const auto r = perfect_encode(a, seed_for(i), code);
            CHECK(*r.index == 1);
            CHECK(r.description.to_string() == "1");
        }
    }
    SECTION("mean index is 1/p")
    {
        const std::size_t k = GENERATE(2, 3);
        const double p = static_cast<double>(oracle::exact_perfect_index_law(k));
        std::vector<double> idx;
        for (std::uint64_t i = 0; i < 10'000; ++i) {
            const KeySet a = random_key_set(1'000'000, k, i);
            const auto s = seed_for(i);
            const auto r = perfect_encode(a, s, code);
            REQUIRE(collision_fraction_set(a, decode(r.description, s, make_scheme_config(1'000'000, k, 1.0,
                                                                                             SchemeKind::perfect,
                                                                                             CodeKind::elias_delta))) ==
                    Fraction(0, 1));
            idx.push_back(static_cast<double>(*r.index));
        }
        const auto m = testing::mean_and_se(idx);
        INFO("k=" << k << " mean index " << m.mean);
        CHECK(std::abs(m.mean - 1.0 / p) <= (k == 2 ? 0.1 : 0.2));
    }
    SECTION("index law at k=3 is Geom(2/9)")
    {
        const double p = 2.0 / 9.0;
        const std::size_t trials = 10'000;
        std::vector<double> observed(40, 0.0);
        const KeySet a(1000, {10, 20, 30});
        for (std::uint64_t i = 0; i < trials; ++i) {
            const auto t = *perfect_encode(a, seed_for(i + 77), code).index;
            observed[std::min<std::uint64_t>(t, 40) - 1] += 1.0;
        }
        std::vector<double> expected(40);
        for (std::size_t t = 1; t < 40; ++t) {
            expected[t - 1] = trials * p * std::pow(1 - p, static_cast<double>(t - 1));
        }
        expected[39] = trials * std::pow(1 - p, 39.0);
        CHECK(testing::chi_square_p_value(observed, expected) > 0.001);
    }
    SECTION("probe budget is enforced")
    {
        const KeySet a = random_key_set(1000, 16, 1);
        CHECK_THROWS_AS(perfect_encode(a, seed_for(1), code, 10), ProbeBudgetExceeded);
    }
}

TEST_CASE("zero-bit scheme", "[schemes]")
{
    const KeySet a(50, {1, 2, 3});
    const auto s = seed_for(3);
    const auto r = zero_bit_encode(a, s);
    CHECK(r.description.empty());
    CHECK_FALSE(r.index.has_value());
    const auto cfg = make_scheme_config(50, 3, 1.0 / std::numbers::e, SchemeKind::zero_bit, CodeKind::elias_delta);
    CHECK(decode(BitString(), s, cfg) == HashFunctionHandle{s, 1, 3});
    CHECK_THROWS_AS(decode(BitString::from_string("1"), s, cfg), DecodeError);

    for (std::size_t k : {2U, 3U}) {
        std::vector<double> d;
        for (std::uint64_t i = 0; i < 10'000; ++i) {
            const KeySet b = random_key_set(1'000'000, k, i);
            d.push_back(collision_fraction_set(b, HashFunctionHandle{seed_for(i), 1, static_cast<std::uint32_t>(k)})
                            .to_double());
        }
        const double expected = 1.0 - std::pow(1.0 - 1.0 / k, static_cast<double>(k - 1));
        CHECK(testing::mean_and_se(d).mean == Approx(expected).margin(0.02));
    }
}

TEST_CASE("mixture scheme", "[schemes]")
{
    const KeySet a = random_key_set(1000, 6, 9);
    const auto code = IntegerCode::elias_gamma();
    for (std::uint64_t i = 0; i < 200; ++i) {
        const auto s = seed_for(i);
        const auto one = mixture_encode(a, s, 1.0, code);
        CHECK(*one.branch == Branch::perfect);
        CHECK(collision_fraction_set(a, HashFunctionHandle{s, *one.index, 6}) == Fraction(0, 1));
        const auto zero = mixture_encode(a, s, 0.0, code);
        CHECK(*zero.branch == Branch::zero);
        CHECK(zero.description.empty());
        CHECK(mixture_branch(s, 0.3) == mixture_branch(s, 0.3));
    }
    std::size_t perfect = 0;
    for (std::uint64_t i = 0; i < 20'000; ++i) {
        perfect += mixture_branch(seed_for(i), 0.3) == Branch::perfect ? 1 : 0;
    }
    CHECK(perfect / 20'000.0 == Approx(0.3).margin(0.015));
}

TEST_CASE("pfr with w=0 always picks the first function", "[schemes]")
{
    const KeySet a = random_key_set(1000, 5, 4);
    const auto code = IntegerCode::elias_delta();
    for (std::uint64_t i = 0; i < 200; ++i) {
        const auto r = pfr_encode(a, seed_for(i), UrnDistribution(5, 0.0), code);
        CHECK(*r.index == 1);
        CHECK(r.description == encode_int(code, 1));
    }
}

TEST_CASE("pfr output follows the urn law", "[schemes][statistical]")
{
    const auto code = IntegerCode::elias_delta();
    SECTION("k=2, w=1")
    {
        const KeySet a(100, {5, 60});
        const UrnDistribution d(2, 0.5);
        std::map<RestrictionVector, double> counts;
        const double n = 100'000;
        for (std::uint64_t i = 0; i < 100'000; ++i) {
            const auto s = seed_for(i);
            counts[restriction(s, *pfr_encode(a, s, d, code).index, a)] += 1.0;
        }
        CHECK(counts.count(RestrictionVector{1, 1}) == 0);
        CHECK(counts.count(RestrictionVector{2, 2}) == 0);
        const double tv = 0.5 * (std::abs(counts[{1, 2}] / n - 0.5) + std::abs(counts[{2, 1}] / n - 0.5));
        CHECK(tv <= 0.01);
    }
    SECTION("k=4, w=2")
    {
        const KeySet a(1000, {3, 17, 99, 500});
        const auto d = UrnDistribution::from_w(4, 2);
        std::map<RestrictionVector, double> counts;
        const double n = 100'000;
        for (std::uint64_t i = 0; i < 100'000; ++i) {
            const auto s = seed_for(i + 1'000'000);
            counts[restriction(s, *pfr_encode(a, s, d, code).index, a)] += 1.0;
        }
        double tv = 0.0;
        for (const auto& x : all_vectors(4)) {
            const double p = static_cast<double>(pmf(d, x));
            const double q = counts.count(x) ? counts[x] / n : 0.0;
            if (p == 0.0) {
                CHECK(q == 0.0);
            }
            tv += std::abs(p - q);
        }
        CHECK(tv / 2 <= 0.02);
    }
}

TEST_CASE("pfr index entropy and key-set invariance", "[schemes][statistical]")
{
    const auto d = UrnDistribution::from_w(4, 2);
    const auto code = IntegerCode::elias_delta();
    const KeySet a1(1000, {1, 2, 3, 4});
    const KeySet a2(1000, {500, 600, 700, 800});
    std::map<std::uint64_t, double> k1;
    std::map<std::uint64_t, double> k2;
    for (std::uint64_t i = 0; i < 50'000; ++i) {
        k1[*pfr_encode(a1, seed_for(i), d, code).index] += 1.0;
        k2[*pfr_encode(a2, seed_for(i + 5'000'000), d, code).index] += 1.0;
    }
    const double h_x = oracle::exact_entropy(oracle::enumerate_r_lambda(4, 2));
    const double div = 8.0 - h_x;
    CHECK(testing::plug_in_entropy_bits(k1) <= div + std::log2(div + 1.0) + 4.0);
    CHECK(testing::two_sample_p_value(k1, k2) > 0.001);
}

TEST_CASE("round trips for every scheme", "[schemes]")
{
    for (auto kind : {SchemeKind::perfect, SchemeKind::zero_bit, SchemeKind::mixture, SchemeKind::pfr}) {
        for (std::uint64_t i = 0; i < 100; ++i) {
            const std::size_t k = 1 + i % 9;
            const KeySet a = random_key_set(10'000, k, i * 31 + 7);
            const auto s = seed_for(i);
            const auto cfg = make_scheme_config(10'000, k, 0.8, kind,
                                                kind == SchemeKind::pfr ? CodeKind::elias_delta : CodeKind::golomb);
            const auto enc = encode(a, s, cfg);
            const auto h = decode(enc.description, s, cfg);
            const std::uint64_t chosen = enc.index.value_or(1);
            INFO(to_string(kind) << " case " << i);
            REQUIRE(h.index == chosen);
            REQUIRE(restriction(h.seed, h.index, a) == restriction(s, chosen, a));
            if (kind == SchemeKind::perfect) {
                REQUIRE(collision_fraction_set(a, h) == Fraction(0, 1));
            }
        }
    }
}

TEST_CASE("malformed descriptions are rejected", "[schemes]")
{
    const auto cfg = make_scheme_config(100, 3, 1.0, SchemeKind::perfect, CodeKind::elias_gamma);
    const auto s = seed_for(1);
    CHECK_THROWS_AS(decode(BitString::from_string("10"), s, cfg), DecodeError);
    CHECK_THROWS_AS(decode(BitString(), s, cfg), DecodeError);
    CHECK_THROWS_AS(decode(BitString::from_string("0"), s, cfg), DecodeError);
    CHECK_THROWS_AS(encode(KeySet(100, {1, 2}), s, cfg), std::invalid_argument);
}

TEST_CASE("descriptions are prefix-free for a fixed seed", "[schemes][property]")
{
    for (auto kind : {SchemeKind::perfect, SchemeKind::mixture, SchemeKind::pfr}) {
        const std::size_t k = 5;
        const auto cfg = make_scheme_config(100'000, k, 0.85, kind, CodeKind::golomb);
        for (std::uint64_t z = 0; z < 5; ++z) {
            const auto s = seed_for(z + 900);
            std::set<std::string> outputs;
            for (std::uint64_t j = 0; j < 300; ++j) {
                outputs.insert(encode(random_key_set(100'000, k, j), s, cfg).description.to_string());
            }
            for (const auto& x : outputs) {
                for (const auto& y : outputs) {
                    if (x != y) {
                        REQUIRE_FALSE(y.starts_with(x));
                    }
                }
            }
        }
    }
}

TEST_CASE("alpha-perfectness across key sets", "[schemes][statistical]")
{
    struct Case {
        SchemeKind kind;
        double alpha;
    };
    const std::size_t k = 8;
    for (const Case c : {Case{SchemeKind::perfect, 1.0}, Case{SchemeKind::zero_bit, 1.0 / std::numbers::e},
                         Case{SchemeKind::mixture, 0.9}, Case{SchemeKind::pfr, 0.9}, Case{SchemeKind::pfr, 0.6}}) {
        ExperimentConfig cfg;
        cfg.scheme = make_scheme_config(1'000'000, k, c.alpha, c.kind,
                                        c.kind == SchemeKind::pfr ? CodeKind::elias_delta : CodeKind::golomb);
        cfg.trials = 10'000;
        cfg.key_sets = 20;
        cfg.base_seed = 17;
        const auto report = run_experiment(cfg);
        for (const auto& ks : report.key_sets) {
            INFO(to_string(c.kind) << " alpha=" << c.alpha << " keyset " << ks.keyset_id);
            CHECK(ks.mean_d <= 1.0 - c.alpha + 3.0 * ks.se_d + 1e-12);
        }
    }
}

TEST_CASE("scheme configuration", "[schemes]")
{
    const auto perfect = make_scheme_config(1000, 3, 0.5, SchemeKind::perfect, CodeKind::golomb);
    CHECK(perfect.lambda == 1.0);
    CHECK(perfect.code.golomb_m() == golomb_parameter_for_geometric(6.0 / 27.0));
    const auto pfr = make_scheme_config(1000, 12, 0.9, SchemeKind::pfr, CodeKind::golomb);
    CHECK(pfr.lambda == Approx(lambda_for_alpha(0.9)));
    CHECK(pfr.code.golomb_m() == golomb_parameter_for_geometric(std::exp2(-max_log_ratio(pfr.urn()))));
    CHECK(make_scheme_config(1000, 3, 0.9, SchemeKind::zero_bit, CodeKind::golomb).lambda == 0.0);
    CHECK_THROWS_AS(make_scheme_config(1000, 3, 0.9, SchemeKind::pfr, CodeKind::empirical_shannon),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_scheme_config(2, 3, 0.9, SchemeKind::pfr, CodeKind::elias_delta), std::invalid_argument);
    CHECK(parse_scheme_kind("zero") == SchemeKind::zero_bit);
    CHECK_FALSE(parse_scheme_kind("bogus").has_value());
}

TEST_CASE("calibrated lambda is the smallest lattice point within budget", "[schemes]")
{
    for (std::size_t k : {2U, 5U, 12U}) {
        for (double alpha : {0.5, 0.7, 0.9, 1.0}) {
            const double lam = calibrated_lambda(k, alpha);
            const auto w = static_cast<std::size_t>(std::lround(lam * k));
            const BigRational budget(1.0 - alpha);
            CHECK(expected_distortion(UrnDistribution::from_w(k, w)) <= budget);
            if (w > 0) {
                CHECK(expected_distortion(UrnDistribution::from_w(k, w - 1)) > budget);
            }
            CHECK(lam <= std::max(lambda_for_alpha(alpha), 1.0 / k) + 1.0 / k);
        }
    }
}
