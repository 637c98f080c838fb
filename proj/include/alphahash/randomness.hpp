#pragma once

// Deterministic common randomness.
//
// Every random quantity shared by encoder and decoder is a pure function of a
// 64-bit seed and a few counters, built from the splitmix64 finalizer:
//
//   mix64(x)        = splitmix64 finalizer of x
//   key_state(z, a) = mix64(mix64(z ^ kHashDomain) + a * kKeyStep)
//   draw(z, t, a)   = mix64(key_state(z, a) + t * kGolden)
//
// so for a fixed key the sequence over function indices t is a splitmix64
// stream. eval_hash reduces draw() to [1, k] by rejection (values at or above
// k * floor(2^64 / k) are re-mixed with mix64(v + kGolden) until accepted),
// which keeps every hash value exactly uniform.
//
// Arrival times use their own domain: increment t is -ln(u) with
// u = ((mix64(mix64(u_seed ^ kArrivalDomain) + t * kGolden) >> 11) + 0.5) / 2^53,
// a uniform on the open interval (0, 1), so T_t is strictly increasing.

#include "alphahash/core.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace alphahash {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
inline constexpr std::uint64_t kKeyStep = 0xD1B54A32D192ED03ULL;
inline constexpr std::uint64_t kHashDomain = 0x68617368'66756e63ULL;     // "hashfunc"
inline constexpr std::uint64_t kArrivalDomain = 0x61727269'76616c73ULL;  // "arrivals"
inline constexpr std::uint64_t kBranchDomain = 0x6272616e'63686269ULL;   // "branchbi"

constexpr std::uint64_t mix64(std::uint64_t x)
{
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

/// Keyed 64-bit PRF over (seed, domain, a, b).
constexpr std::uint64_t prf(std::uint64_t seed, std::uint64_t domain, std::uint64_t a, std::uint64_t b = 0)
{
    std::uint64_t h = mix64(seed ^ domain);
    h = mix64(h + a * kKeyStep);
    return mix64(h + b * kGolden);
}

/// Uniform double in the open interval (0, 1) built from the top 53 bits.
constexpr double open_unit(std::uint64_t bits)
{
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Maps a 64-bit word to [0, range) exactly uniformly, re-mixing rejected words.
constexpr std::uint64_t reduce_uniform(std::uint64_t v, std::uint64_t range)
{
    if ((range & (range - 1)) == 0) {
        return v & (range - 1);
    }
    const std::uint64_t limit = (std::numeric_limits<std::uint64_t>::max() / range) * range;
    while (v >= limit) {
        v = mix64(v + kGolden);
    }
    return v % range;
}

/// Per-key precomputation for evaluating many functions of the stream at one key.
constexpr std::uint64_t key_state(std::uint64_t z_seed, std::uint64_t key)
{
    return mix64(mix64(z_seed ^ kHashDomain) + key * kKeyStep);
}

/// C^(index)(key) given the precomputed key state; no argument checks.
constexpr std::uint32_t eval_from_state(std::uint64_t state, std::uint64_t index, std::uint32_t range)
{
    return static_cast<std::uint32_t>(reduce_uniform(mix64(state + index * kGolden), range)) + 1;
}

/// Value of C^(index) at `key`, in [1, range].
/// Throws std::out_of_range for index 0, key 0 or range 0.
std::uint32_t eval_hash(const SharedSeed& seed, std::uint64_t index, std::uint64_t key, std::uint32_t range);

/// Restriction of C^(index) to the keys of `a` (range |a|).
RestrictionVector restriction(const SharedSeed& seed, std::uint64_t index, const KeySet& a);

/// Arrival times T_1 < T_2 < ... of a unit-rate Poisson process.
class ArrivalStream {
public:
    explicit ArrivalStream(std::uint64_t u_seed) : u_seed_(u_seed), state_(mix64(u_seed ^ kArrivalDomain)) {}

    /// Exp(1) increment T_t - T_{t-1}; t >= 1.
    double increment(std::uint64_t t) const { return -std::log(open_unit(mix64(state_ + t * kGolden))); }

    /// Advances the stream and returns the next arrival time.
    double next()
    {
        ++emitted_;
        time_ += increment(emitted_);
        return time_;
    }

    std::uint64_t emitted() const { return emitted_; }
    std::uint64_t u_seed() const { return u_seed_; }

private:
    std::uint64_t u_seed_;
    std::uint64_t state_;
    std::uint64_t emitted_ = 0;
    double time_ = 0.0;
};

/// T_t computed from scratch; throws std::out_of_range for t = 0.
double arrival_time(std::uint64_t u_seed, std::uint64_t t);

/// Counter-based generator satisfying UniformRandomBitGenerator, used for key
/// set generation and the urn sampler so results do not depend on the
/// standard library's distributions.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        state_ += kGolden;
        return mix64(state_);
    }

private:
    std::uint64_t state_;
};

/// Uniform integer in [0, bound) from any 64-bit generator, bias-free.
template <class Rng>
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound)
{
    if (bound == 0) {
        throw std::invalid_argument("uniform_below: empty range");
    }
    const std::uint64_t limit = (std::numeric_limits<std::uint64_t>::max() / bound) * bound;
    std::uint64_t v = rng();
    while (v >= limit) {
        v = rng();
    }
    return v % bound;
}

template <class Rng>
double uniform_open01(Rng& rng)
{
    return open_unit(rng());
}

}  // namespace alphahash
