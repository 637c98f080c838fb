#pragma once

// Key sets, restriction vectors and the collision metrics.
//
// Hash values and keys are 1-based throughout: keys live in [1, n] and hash
// values in [1, k].

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace alphahash {

/// Exact non-negative fraction, always stored in lowest terms.
struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Fraction() = default;
    Fraction(std::int64_t n, std::int64_t d);

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Fraction& a, const Fraction& b) = default;
    friend bool operator<(const Fraction& a, const Fraction& b)
    {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(const Fraction& a, const Fraction& b) { return !(b < a); }
};

std::string to_string(const Fraction& f);

/// A size-k subset of the universe [1, n], stored sorted.
class KeySet {
public:
    /// Sorts `keys`; throws std::invalid_argument on duplicates, an empty set,
    /// k > n, or keys outside [1, n].
    KeySet(std::uint64_t universe_size, std::vector<std::uint64_t> keys);

    std::uint64_t universe_size() const { return universe_size_; }
    std::size_t size() const { return keys_.size(); }
    std::span<const std::uint64_t> keys() const { return keys_; }
    std::uint64_t operator[](std::size_t i) const { return keys_[i]; }

    friend bool operator==(const KeySet&, const KeySet&) = default;

private:
    std::uint64_t universe_size_;
    std::vector<std::uint64_t> keys_;
};

/// Values of one hash function on the keys of a set, in key order. Each entry
/// is in [1, k] where k is the vector length.
struct RestrictionVector {
    std::vector<std::uint32_t> values;

    RestrictionVector() = default;
    explicit RestrictionVector(std::vector<std::uint32_t> v) : values(std::move(v)) {}
    RestrictionVector(std::initializer_list<std::uint32_t> v) : values(v) {}

    std::size_t size() const { return values.size(); }
    std::uint32_t operator[](std::size_t i) const { return values[i]; }

    /// True when every entry lies in [1, size()].
    bool well_formed() const;

    friend bool operator==(const RestrictionVector&, const RestrictionVector&) = default;
    friend auto operator<=>(const RestrictionVector&, const RestrictionVector&) = default;
};

/// Collision indicator v(x) and its weight.
struct CollisionProfile {
    std::vector<std::uint8_t> indicator;
    std::size_t weight = 0;

    friend bool operator==(const CollisionProfile&, const CollisionProfile&) = default;
};

/// Randomness shared by encoder and decoder. `z_seed` names the stream of hash
/// functions C^(1), C^(2), ...; `u_seed` names the auxiliary arrival times.
struct SharedSeed {
    std::uint64_t z_seed = 0;
    std::uint64_t u_seed = 0;

    /// Splits one user-facing 64-bit seed into the two streams.
    static SharedSeed from_u64(std::uint64_t seed);

    friend bool operator==(const SharedSeed&, const SharedSeed&) = default;
};

/// One member of the shared hash-function stream, evaluated lazily.
struct HashFunctionHandle {
    SharedSeed seed;
    std::uint64_t index = 1;
    std::uint32_t range = 1;

    /// Hash value in [1, range]; throws std::out_of_range for key 0.
    std::uint32_t operator()(std::uint64_t key) const;

    friend bool operator==(const HashFunctionHandle&, const HashFunctionHandle&) = default;
};

/// d(A, h): fraction of keys sharing their hash value with another key.
/// Throws std::invalid_argument when h.range != |A|.
Fraction collision_fraction_set(const KeySet& a, const HashFunctionHandle& h);

/// d(x) for a restriction vector.
Fraction collision_fraction_vector(const RestrictionVector& x);

CollisionProfile collision_profile(const RestrictionVector& x);

/// Number of values that occur exactly once in x.
std::size_t singleton_count(const RestrictionVector& x);

/// Number of positions whose value occurs more than once (k * d(x)).
std::size_t colliding_count(std::span<const std::uint32_t> values);

namespace detail {
/// Singleton count using caller-owned scratch of size >= k + 1. The scratch
/// is left zeroed on return, so it can be reused across calls.
std::size_t singleton_count(std::span<const std::uint32_t> values, std::span<std::uint32_t> scratch);
}  // namespace detail

}  // namespace alphahash
