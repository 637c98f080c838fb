#include "alphahash/randomness.hpp"

namespace alphahash {

std::uint32_t eval_hash(const SharedSeed& seed, std::uint64_t index, std::uint64_t key, std::uint32_t range)
{
    if (index < 1) {
        throw std::out_of_range("eval_hash: function index must be >= 1");
    }
    if (key < 1) {
        throw std::out_of_range("eval_hash: key must be >= 1");
    }
    if (range < 1) {
        throw std::out_of_range("eval_hash: range must be >= 1");
    }
    return eval_from_state(key_state(seed.z_seed, key), index, range);
}

RestrictionVector restriction(const SharedSeed& seed, std::uint64_t index, const KeySet& a)
{
    const auto range = static_cast<std::uint32_t>(a.size());
    RestrictionVector x;
    x.values.reserve(a.size());
    for (auto key : a.keys()) {
        if (key > a.universe_size()) {
            throw std::out_of_range("restriction: key outside universe");
        }
        x.values.push_back(eval_hash(seed, index, key, range));
    }
    return x;
}

double arrival_time(std::uint64_t u_seed, std::uint64_t t)
{
    if (t < 1) {
        throw std::out_of_range("arrival_time: t must be >= 1");
    }
    ArrivalStream stream(u_seed);
    double time = 0.0;
    for (std::uint64_t i = 0; i < t; ++i) {
        time = stream.next();
    }
    return time;
}

}  // namespace alphahash
