#include "alphahash/urn.hpp"

#include <numbers>
#include <stdexcept>

namespace alphahash {

namespace {

using boost::multiprecision::cpp_int;

cpp_int falling_factorial(std::size_t n, std::size_t count)
{
    cpp_int r = 1;
    for (std::size_t i = 0; i < count; ++i) {
        r *= n - i;
    }
    return r;
}

cpp_int int_pow(std::size_t base, std::size_t exp)
{
    cpp_int r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        r *= base;
    }
    return r;
}

// log2(n!/(n-count)!)
double log2_falling(std::size_t n, std::size_t count)
{
    double r = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        r += std::log2(static_cast<double>(n - i));
    }
    return r;
}

double xlog2x(double x) { return x == 0.0 ? 0.0 : x * std::log2(x); }

}  // namespace

UrnDistribution::UrnDistribution(std::size_t k, double lambda) : k_(k), lambda_(lambda)
{
    if (k < 1) {
        throw std::invalid_argument("UrnDistribution: k must be >= 1");
    }
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("UrnDistribution: lambda must be in [0, 1]");
    }
    // lambda * k within rounding noise of an integer counts as that integer,
    // so e.g. lambda = 0.3, k = 10 gives w = 3 rather than 4.
    const double scaled = lambda * static_cast<double>(k);
    const double nearest = std::round(scaled);
    w_ = static_cast<std::size_t>(std::abs(scaled - nearest) <= 1e-9 * std::max(1.0, scaled) ? nearest
                                                                                             : std::ceil(scaled));
}

UrnDistribution UrnDistribution::from_w(std::size_t k, std::size_t w)
{
    if (w > k) {
        throw std::invalid_argument("UrnDistribution::from_w: w exceeds k");
    }
    UrnDistribution d(k, 0.0);
    d.lambda_ = static_cast<double>(w) / static_cast<double>(k);
    d.w_ = w;
    return d;
}

BigRational pmf_for_singletons(const UrnDistribution& d, std::size_t s)
{
    const std::size_t k = d.k();
    const std::size_t w = d.w();
    if (s < w || s > k) {
        return BigRational(0);
    }
    // (k-w)!/k! = 1 / (k falling w)
    const cpp_int kw = falling_factorial(k, w);
    const cpp_int num = falling_factorial(s, w);
    const cpp_int den = kw * kw * int_pow(k - w, k - w);
    return BigRational(num, den);
}

BigRational pmf(const UrnDistribution& d, const RestrictionVector& x)
{
    if (x.size() != d.k() || !x.well_formed()) {
        throw std::invalid_argument("pmf: x is not a vector in [k]^k");
    }
    return pmf_for_singletons(d, singleton_count(x));
}

double log_ratio_for_singletons(const UrnDistribution& d, std::size_t s)
{
    const std::size_t k = d.k();
    const std::size_t w = d.w();
    if (s < w || s > k) {
        return -std::numeric_limits<double>::infinity();
    }
    const double kd = static_cast<double>(k);
    return log2_falling(s, w) - 2.0 * log2_falling(k, w) - xlog2x(static_cast<double>(k - w)) + kd * std::log2(kd);
}

double log_ratio_to_uniform(const UrnDistribution& d, const RestrictionVector& x)
{
    if (x.size() != d.k() || !x.well_formed()) {
        throw std::invalid_argument("log_ratio_to_uniform: x is not a vector in [k]^k");
    }
    return log_ratio_for_singletons(d, singleton_count(x));
}

bool singleton_count_feasible(std::size_t k, std::size_t s) { return s == k || s + 2 <= k; }

double max_log_ratio(const UrnDistribution& d)
{
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t s = d.w(); s <= d.k(); ++s) {
        if (singleton_count_feasible(d.k(), s)) {
            best = std::max(best, log_ratio_for_singletons(d, s));
        }
    }
    return best;
}

double urn_distortion_bound(const UrnDistribution& d)
{
    return (1.0 - 1.0 / std::numbers::e) * (1.0 - d.lambda());
}

double urn_entropy_lower_bound(const UrnDistribution& d)
{
    const double k = static_cast<double>(d.k());
    const double lambda = d.lambda();
    const double a = 1.0 - (lambda - 1.0 / k) / 2.0;
    const double b = a - (1.0 - 1.0 / std::numbers::e) * (1.0 - lambda - 1.0 / k);
    return k * std::log2(k) - lambda * k * std::numbers::log2e + lambda * k * std::log2(a / b);
}

double divergence_from_uniform(const UrnDistribution& d, double exact_entropy)
{
    const double k = static_cast<double>(d.k());
    return k * std::log2(k) - exact_entropy;
}

BigRational expected_distortion(const UrnDistribution& d)
{
    const std::size_t m = d.k() - d.w();
    if (m < 2) {
        return BigRational(0);
    }
    // m/k * (1 - ((m-1)/m)^(m-1))
    const BigRational survive(int_pow(m - 1, m - 1), int_pow(m, m - 1));
    return BigRational(m, d.k()) * (BigRational(1) - survive);
}

}  // namespace alphahash
