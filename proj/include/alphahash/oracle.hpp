#pragma once

// Exhaustive ground truth at small k.
//
// Nothing here calls the closed-form pmf or the samplers: distributions are
// built by walking every urn outcome and every coordinate permutation, with
// exact rational masses. Entropies are evaluated in 50-digit floating point.

#include "alphahash/core.hpp"
#include "alphahash/urn.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace alphahash::oracle {

using HighFloat = boost::multiprecision::cpp_bin_float_50;

inline constexpr std::size_t kMaxDistributionK = 6;
inline constexpr std::size_t kMaxJointK = 5;
inline constexpr std::size_t kMaxIndexLawK = 8;

/// Support of a distribution on [k]^k in lexicographic order, zero-mass
/// vectors omitted.
struct ExactDistribution {
    std::size_t k = 0;
    std::vector<std::pair<RestrictionVector, BigRational>> support;

    /// Mass of x (zero when x is outside the support).
    BigRational mass(const RestrictionVector& x) const;
    BigRational total() const;
};

/// Law of X under r with parameter w, enumerated over all ordered
/// without-replacement prefixes, with-replacement suffixes from the reduced
/// urn, and k! coordinate permutations. OpenMP-parallel over prefixes.
/// Throws std::invalid_argument for k > kMaxDistributionK or w > k.
ExactDistribution enumerate_r_lambda(std::size_t k, std::size_t w);

/// Single-threaded reference for enumerate_r_lambda.
ExactDistribution enumerate_r_lambda_serial(std::size_t k, std::size_t w);

/// Law of the pre-permutation vector Y.
ExactDistribution enumerate_pre_permutation(std::size_t k, std::size_t w);

HighFloat exact_entropy_hp(const ExactDistribution& dist);
double exact_entropy(const ExactDistribution& dist);

/// log2(k!/(k-w)!) + (k-w) log2(k-w), with 0 log2 0 = 0.
double exact_pre_permutation_entropy(std::size_t k, std::size_t w);

/// Sum over the support of p(x) d(x).
BigRational exact_expected_distortion(const ExactDistribution& dist);

struct ConditionalEntropyCheck {
    double lhs = 0.0;  // H(X | v(X))
    double rhs = 0.0;  // H(Y | v(Y))
    bool equal = false;
};

/// Both conditional entropies from the enumerated joint laws; equal within 1e-12.
ConditionalEntropyCheck conditional_entropy_identity_check(std::size_t k, std::size_t w);

/// Probability that a uniform function [k] -> [k] is injective, by counting
/// all k^k functions.
BigRational exact_perfect_index_law(std::size_t k);

HighFloat to_high(const BigRational& r);

struct VerifyRow {
    std::string check;
    std::size_t k = 0;
    std::size_t w = 0;
    double lambda = 0.0;
    bool passed = false;
    /// Informational rows are printed but never fail a verification run.
    bool gated = true;
    std::string detail;
};

/// Runs every oracle cross-check for k in [1, kmax] (kmax <= kMaxDistributionK).
std::vector<VerifyRow> verify_grid(std::size_t kmax);

}  // namespace alphahash::oracle
