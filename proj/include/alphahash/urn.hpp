#pragma once

// The urn distribution r_lambda on [k]^k.
//
// Sampling: draw w = ceil(lambda * k) values from the urn [k] without
// replacement, then k - w values with replacement from the k - w values left
// in the urn, then shuffle the coordinates uniformly. The resulting pmf
// depends on x only through its singleton count s = s(x):
//
//   r(x) = [s >= w] * s!/(s-w)! * ((k-w)!/k!)^2 * (k-w)^-(k-w),   0^0 = 1.

#include "alphahash/core.hpp"
#include "alphahash/randomness.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

namespace alphahash {

using BigRational = boost::multiprecision::cpp_rational;

class UrnDistribution {
public:
    /// Throws std::invalid_argument unless k >= 1 and lambda in [0, 1].
    UrnDistribution(std::size_t k, double lambda);

    /// Distribution at the lattice point lambda = w / k.
    static UrnDistribution from_w(std::size_t k, std::size_t w);

    std::size_t k() const { return k_; }
    double lambda() const { return lambda_; }
    std::size_t w() const { return w_; }

private:
    std::size_t k_;
    double lambda_;
    std::size_t w_;
};

/// Draws X ~ r_lambda.
template <class Rng>
RestrictionVector sample(const UrnDistribution& d, Rng& rng)
{
    const std::size_t k = d.k();
    const std::size_t w = d.w();
    std::vector<std::uint32_t> urn(k);
    std::iota(urn.begin(), urn.end(), 1U);
    std::vector<std::uint32_t> y(k);
    // Partial Fisher-Yates: after step i, urn[0..i] holds the draws and
    // urn[i+1..k) the values still in the urn.
    for (std::size_t i = 0; i < w; ++i) {
        const auto j = i + uniform_below(rng, k - i);
        std::swap(urn[i], urn[j]);
        y[i] = urn[i];
    }
    const std::size_t left = k - w;
    for (std::size_t i = w; i < k; ++i) {
        y[i] = urn[w + uniform_below(rng, left)];
    }
    for (std::size_t i = k; i > 1; --i) {
        std::swap(y[i - 1], y[uniform_below(rng, i)]);
    }
    return RestrictionVector(std::move(y));
}

/// Exact r_lambda(x). Throws std::invalid_argument if x is not in [k]^k.
BigRational pmf(const UrnDistribution& d, const RestrictionVector& x);

/// Exact pmf of any vector with singleton count s.
BigRational pmf_for_singletons(const UrnDistribution& d, std::size_t s);

/// log2(r(x) * k^k); -infinity on zero-probability points.
double log_ratio_to_uniform(const UrnDistribution& d, const RestrictionVector& x);

/// log2(r(x) * k^k) for any x with singleton count s, -infinity when s < w.
double log_ratio_for_singletons(const UrnDistribution& d, std::size_t s);

/// True when some x in [k]^k has exactly s singletons (s = k or s <= k - 2).
bool singleton_count_feasible(std::size_t k, std::size_t s);

/// Maximum of log_ratio_to_uniform over [k]^k.
double max_log_ratio(const UrnDistribution& d);

/// (1 - 1/e)(1 - lambda).
double urn_distortion_bound(const UrnDistribution& d);

/// k log2 k - lambda k log2 e + lambda k log2(a / (a - (1 - 1/e)(1 - lambda - 1/k)))
/// with a = 1 - (lambda - 1/k)/2, evaluated at the distribution's lambda.
double urn_entropy_lower_bound(const UrnDistribution& d);

/// k log2 k - H, the divergence of a distribution on [k]^k with entropy H from uniform.
double divergence_from_uniform(const UrnDistribution& d, double exact_entropy);

/// Exact E[d(X)] under r_lambda: only the k - w with-replacement coordinates
/// can collide, each with probability 1 - (1 - 1/m)^(m-1) where m = k - w.
BigRational expected_distortion(const UrnDistribution& d);

}  // namespace alphahash
