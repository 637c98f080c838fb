#include "alphahash/core.hpp"

#include "alphahash/randomness.hpp"

#include <algorithm>
#include <numeric>

namespace alphahash {

Fraction::Fraction(std::int64_t n, std::int64_t d)
{
    if (d <= 0 || n < 0) {
        throw std::invalid_argument("Fraction: need n >= 0 and d > 0");
    }
    const std::int64_t g = std::gcd(n, d);
    num = n / g;
    den = d / g;
}

std::string to_string(const Fraction& f)
{
    return std::to_string(f.num) + "/" + std::to_string(f.den);
}

KeySet::KeySet(std::uint64_t universe_size, std::vector<std::uint64_t> keys)
    : universe_size_(universe_size), keys_(std::move(keys))
{
    if (keys_.empty()) {
        throw std::invalid_argument("KeySet: k must be at least 1");
    }
    if (keys_.size() > universe_size_) {
        throw std::invalid_argument("KeySet: k exceeds universe size");
    }
    std::sort(keys_.begin(), keys_.end());
    if (std::adjacent_find(keys_.begin(), keys_.end()) != keys_.end()) {
        throw std::invalid_argument("KeySet: duplicate key");
    }
    if (keys_.front() < 1 || keys_.back() > universe_size_) {
        throw std::invalid_argument("KeySet: key outside [1, n]");
    }
}

bool RestrictionVector::well_formed() const
{
    const auto k = values.size();
    return std::all_of(values.begin(), values.end(), [k](std::uint32_t v) { return v >= 1 && v <= k; });
}

SharedSeed SharedSeed::from_u64(std::uint64_t seed)
{
    return SharedSeed{prf(seed, kHashDomain, 0x7a), prf(seed, kArrivalDomain, 0x75)};
}

std::uint32_t HashFunctionHandle::operator()(std::uint64_t key) const
{
    return eval_hash(seed, index, key, range);
}

namespace {

std::vector<std::uint32_t> multiplicities(std::span<const std::uint32_t> values)
{
    std::vector<std::uint32_t> count(values.size() + 1, 0);
    for (auto v : values) {
        if (v < 1 || v > values.size()) {
            throw std::invalid_argument("restriction vector entry outside [1, k]");
        }
        ++count[v];
    }
    return count;
}

}  // namespace

std::size_t colliding_count(std::span<const std::uint32_t> values)
{
    const auto count = multiplicities(values);
    return static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [&](std::uint32_t v) { return count[v] > 1; }));
}

Fraction collision_fraction_vector(const RestrictionVector& x)
{
    if (x.size() == 0) {
        return Fraction{};
    }
    return Fraction(static_cast<std::int64_t>(colliding_count(x.values)), static_cast<std::int64_t>(x.size()));
}

Fraction collision_fraction_set(const KeySet& a, const HashFunctionHandle& h)
{
    if (h.range != a.size()) {
        throw std::invalid_argument("collision_fraction_set: hash range " + std::to_string(h.range) +
                                    " does not match |A| = " + std::to_string(a.size()));
    }
    return collision_fraction_vector(restriction(h.seed, h.index, a));
}

CollisionProfile collision_profile(const RestrictionVector& x)
{
    const auto count = multiplicities(x.values);
    CollisionProfile p;
    p.indicator.reserve(x.size());
    for (auto v : x.values) {
        const bool hit = count[v] > 1;
        p.indicator.push_back(hit ? 1 : 0);
        p.weight += hit ? 1 : 0;
    }
    return p;
}

std::size_t singleton_count(const RestrictionVector& x)
{
    const auto count = multiplicities(x.values);
    return static_cast<std::size_t>(std::count(count.begin(), count.end(), 1u));
}

namespace detail {

std::size_t singleton_count(std::span<const std::uint32_t> values, std::span<std::uint32_t> scratch)
{
    for (auto v : values) {
        ++scratch[v];
    }
    std::size_t singles = 0;
    for (auto v : values) {
        singles += scratch[v] == 1 ? 1 : 0;
    }
    for (auto v : values) {
        scratch[v] = 0;
    }
    return singles;
}

}  // namespace detail

}  // namespace alphahash
