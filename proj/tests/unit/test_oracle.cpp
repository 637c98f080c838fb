#include "alphahash/oracle.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace alphahash;
using namespace alphahash::oracle;
using Catch::Approx;

namespace {

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

BigRational factorial(std::size_t n)
{
    BigRational f = 1;
    for (std::size_t i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

}  // namespace

TEST_CASE("enumeration examples", "[oracle]")
{
    const auto d = enumerate_r_lambda(2, 1);
    REQUIRE(d.support.size() == 2);
    CHECK(d.mass({1, 2}) == BigRational(1, 2));
    CHECK(d.mass({2, 1}) == BigRational(1, 2));
    CHECK(d.mass({1, 1}) == 0);

    for (std::size_t k = 1; k <= 4; ++k) {
        const auto uniform = enumerate_r_lambda(k, 0);
        CHECK(uniform.support.size() == static_cast<std::size_t>(std::pow(k, k)));
        for (const auto& [x, p] : uniform.support) {
            REQUIRE(p == BigRational(1, static_cast<long long>(std::pow(k, k))));
        }
        const auto perms = enumerate_r_lambda(k, k);
        CHECK(perms.support.size() == static_cast<std::size_t>(factorial(k)));
        for (const auto& [x, p] : perms.support) {
            REQUIRE(p == 1 / factorial(k));
            REQUIRE(singleton_count(x) == k);
        }
    }
    CHECK_THROWS_AS(enumerate_r_lambda(kMaxDistributionK + 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_r_lambda(3, 4), std::invalid_argument);
}

TEST_CASE("enumeration is normalized, sorted and duplicate-free", "[oracle][property]")
{
    for (std::size_t k = 1; k <= 5; ++k) {
        for (std::size_t w = 0; w <= k; ++w) {
            const auto d = enumerate_r_lambda(k, w);
            CHECK(d.total() == 1);
            for (std::size_t i = 1; i < d.support.size(); ++i) {
                REQUIRE(d.support[i - 1].first < d.support[i].first);
            }
            CHECK(enumerate_pre_permutation(k, w).total() == 1);
        }
    }
}

TEST_CASE("parallel and serial enumeration agree", "[oracle]")
{
    for (std::size_t k = 1; k <= 5; ++k) {
        for (std::size_t w = 0; w <= k; ++w) {
            const auto a = enumerate_r_lambda(k, w);
            const auto b = enumerate_r_lambda_serial(k, w);
            REQUIRE(a.support == b.support);
        }
    }
}

TEST_CASE("closed-form pmf matches enumeration on every vector", "[oracle][property]")
{
    for (std::size_t k = 1; k <= 5; ++k) {
        const auto xs = all_vectors(k);
        for (std::size_t w = 0; w <= k; ++w) {
            const auto d = enumerate_r_lambda(k, w);
            const auto urn = UrnDistribution::from_w(k, w);
            for (const auto& x : xs) {
                REQUIRE(pmf(urn, x) == d.mass(x));
            }
        }
    }
}

TEST_CASE("exact entropy examples", "[oracle]")
{
    CHECK(exact_entropy(enumerate_r_lambda(2, 1)) == Approx(1.0).epsilon(1e-14));
    CHECK(exact_entropy(enumerate_r_lambda(3, 0)) == Approx(3 * std::log2(3.0)).epsilon(1e-14));
    CHECK(exact_entropy(enumerate_r_lambda(3, 3)) == Approx(std::log2(6.0)).epsilon(1e-14));
}

TEST_CASE("pre-permutation entropy", "[oracle]")
{
    CHECK(exact_pre_permutation_entropy(3, 0) == Approx(3 * std::log2(3.0)));
    CHECK(exact_pre_permutation_entropy(2, 1) == Approx(1.0));
    CHECK(exact_pre_permutation_entropy(4, 2) == Approx(std::log2(12.0) + 2.0));
    for (std::size_t k = 1; k <= 6; ++k) {
        for (std::size_t w = 0; w <= k; ++w) {
            INFO("k=" << k << " w=" << w);
            const double hy = exact_pre_permutation_entropy(k, w);
            CHECK(hy == Approx(exact_entropy(enumerate_pre_permutation(k, w))).epsilon(1e-12));
            CHECK(hy >= k * std::log2(static_cast<double>(k)) - w * std::numbers::log2e - 1e-12);
            CHECK(exact_entropy(enumerate_r_lambda(k, w)) >= hy - 1e-12);
        }
    }
}

TEST_CASE("exact expected distortion", "[oracle]")
{
    for (std::size_t k = 1; k <= 5; ++k) {
        CHECK(exact_expected_distortion(enumerate_r_lambda(k, k)) == 0);
    }
    CHECK(exact_expected_distortion(enumerate_r_lambda(2, 1)) == 0);
    CHECK(exact_expected_distortion(enumerate_r_lambda(3, 0)) == BigRational(5, 9));
    for (std::size_t k = 1; k <= 6; ++k) {
        // Zero-bit law: each key avoids the other k-1 with probability (1 - 1/k)^(k-1).
        BigRational survive = 1;
        for (std::size_t i = 1; i < k; ++i) {
            survive *= BigRational(k - 1, k);
        }
        CHECK(exact_expected_distortion(enumerate_r_lambda(k, 0)) == 1 - survive);
        for (std::size_t w = 0; w <= k; ++w) {
            REQUIRE(exact_expected_distortion(enumerate_r_lambda(k, w)) ==
                    expected_distortion(UrnDistribution::from_w(k, w)));
        }
    }
}

TEST_CASE("conditional entropy identity", "[oracle]")
{
    for (std::size_t k = 1; k <= 5; ++k) {
        for (std::size_t w = 0; w <= k; ++w) {
            const auto c = conditional_entropy_identity_check(k, w);
            INFO("k=" << k << " w=" << w << " lhs=" << c.lhs << " rhs=" << c.rhs);
            CHECK(c.equal);
        }
    }
    CHECK(conditional_entropy_identity_check(3, 3).lhs == Approx(std::log2(6.0)));
    CHECK_THROWS_AS(conditional_entropy_identity_check(kMaxJointK + 1, 1), std::invalid_argument);
}

TEST_CASE("perfect index law", "[oracle]")
{
    CHECK(exact_perfect_index_law(1) == 1);
    CHECK(exact_perfect_index_law(2) == BigRational(1, 2));
    CHECK(exact_perfect_index_law(3) == BigRational(2, 9));
    for (std::size_t k = 1; k <= kMaxIndexLawK; ++k) {
        BigRational closed = factorial(k);
        for (std::size_t i = 0; i < k; ++i) {
            closed /= k;
        }
        CHECK(exact_perfect_index_law(k) == closed);
    }
    CHECK_THROWS_AS(exact_perfect_index_law(kMaxIndexLawK + 1), std::invalid_argument);
}

TEST_CASE("verify grid passes on gated rows", "[oracle]")
{
    const auto rows = verify_grid(4);
    REQUIRE_FALSE(rows.empty());
    for (const auto& r : rows) {
        if (r.gated) {
            INFO(r.check << " k=" << r.k << " w=" << r.w << " " << r.detail);
            CHECK(r.passed);
        }
    }
    CHECK_THROWS_AS(verify_grid(kMaxDistributionK + 1), std::invalid_argument);
}
