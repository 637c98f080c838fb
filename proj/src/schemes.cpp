#include "alphahash/schemes.hpp"

#include "alphahash/randomness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace alphahash {

std::string to_string(SchemeKind kind)
{
    switch (kind) {
    case SchemeKind::perfect:
        return "perfect";
    case SchemeKind::zero_bit:
        return "zero";
    case SchemeKind::mixture:
        return "mixture";
    case SchemeKind::pfr:
        return "pfr";
    }
    return "unknown";
}

std::optional<SchemeKind> parse_scheme_kind(std::string_view name)
{
    if (name == "perfect") {
        return SchemeKind::perfect;
    }
    if (name == "zero" || name == "zero_bit") {
        return SchemeKind::zero_bit;
    }
    if (name == "mixture") {
        return SchemeKind::mixture;
    }
    if (name == "pfr") {
        return SchemeKind::pfr;
    }
    return std::nullopt;
}

double lambda_for_alpha(double alpha)
{
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("lambda_for_alpha: alpha must be in [0, 1]");
    }
    const double inv_e = 1.0 / std::numbers::e;
    return std::clamp((alpha - inv_e) / (1.0 - inv_e), 0.0, 1.0);
}

double calibrated_lambda(std::size_t k, double alpha)
{
    // E[d] is nonincreasing in w; w = k always meets the budget.
    const BigRational budget(1.0 - alpha);
    for (std::size_t w = 0; w <= k; ++w) {
        if (expected_distortion(UrnDistribution::from_w(k, w)) <= budget) {
            return static_cast<double>(w) / static_cast<double>(k);
        }
    }
    return 1.0;
}

double perfect_success_probability(std::size_t k)
{
    const double kd = static_cast<double>(k);
    return std::exp(std::lgamma(kd + 1.0) - kd * std::log(kd));
}

Branch mixture_branch(const SharedSeed& seed, double lambda)
{
    const double u = open_unit(prf(seed.z_seed, kBranchDomain, 0));
    return u < lambda ? Branch::perfect : Branch::zero;
}

namespace {

std::vector<std::uint64_t> key_states(const KeySet& a, const SharedSeed& seed)
{
    std::vector<std::uint64_t> states;
    states.reserve(a.size());
    for (auto key : a.keys()) {
        states.push_back(key_state(seed.z_seed, key));
    }
    return states;
}

// Value-occupancy bitset reused across probes.
class Occupancy {
public:
    explicit Occupancy(std::size_t k) : words_((k + 64) / 64, 0) {}

    /// Marks v; returns false if it was already marked.
    bool insert(std::uint32_t v)
    {
        auto& word = words_[v >> 6];
        const std::uint64_t bit = std::uint64_t{1} << (v & 63);
        if (word & bit) {
            return false;
        }
        word |= bit;
        return true;
    }

    void clear() { std::fill(words_.begin(), words_.end(), 0); }

private:
    std::vector<std::uint64_t> words_;
};

BitString describe_index(const IntegerCode& code, std::uint64_t index)
{
    return encode_int(code, index);
}

std::uint64_t read_index(const IntegerCode& code, const BitString& description)
{
    const auto decoded = decode_int(code, description);
    if (decoded.consumed != description.size()) {
        throw DecodeError("description has " + std::to_string(description.size() - decoded.consumed) +
                          " trailing bits");
    }
    return decoded.value;
}

}  // namespace

EncodeResult perfect_encode(const KeySet& a, const SharedSeed& seed, const IntegerCode& code,
                            std::uint64_t probe_cap)
{
    const auto range = static_cast<std::uint32_t>(a.size());
    const auto states = key_states(a, seed);
    Occupancy seen(a.size());
    for (std::uint64_t t = 1; t <= probe_cap; ++t) {
        bool injective = true;
        for (auto state : states) {
            if (!seen.insert(eval_from_state(state, t, range))) {
                injective = false;
                break;
            }
        }
        seen.clear();
        if (injective) {
            return EncodeResult{describe_index(code, t), t, std::nullopt, t};
        }
    }
    throw ProbeBudgetExceeded("perfect", probe_cap);
}

EncodeResult zero_bit_encode(const KeySet&, const SharedSeed&)
{
    return EncodeResult{BitString{}, std::nullopt, std::nullopt, 0};
}

EncodeResult mixture_encode(const KeySet& a, const SharedSeed& seed, double lambda, const IntegerCode& code,
                            std::uint64_t probe_cap)
{
    if (mixture_branch(seed, lambda) == Branch::zero) {
        auto result = zero_bit_encode(a, seed);
        result.branch = Branch::zero;
        return result;
    }
    auto result = perfect_encode(a, seed, code, probe_cap);
    result.branch = Branch::perfect;
    return result;
}

EncodeResult pfr_encode(const KeySet& a, const SharedSeed& seed, const UrnDistribution& dist, const IntegerCode& code,
                        std::uint64_t probe_cap)
{
    const std::size_t k = a.size();
    if (dist.k() != k) {
        throw std::invalid_argument("pfr_encode: urn distribution k does not match |A|");
    }
    const auto range = static_cast<std::uint32_t>(k);

    // ratio(x) = r(x) k^k depends on x only through its singleton count.
    std::vector<double> ratio(k + 1, 0.0);
    for (std::size_t s = dist.w(); s <= k; ++s) {
        ratio[s] = std::exp2(log_ratio_for_singletons(dist, s));
    }
    const double ratio_max = std::exp2(max_log_ratio(dist));

    const auto states = key_states(a, seed);
    std::vector<std::uint32_t> x(k);
    std::vector<std::uint32_t> scratch(k + 1, 0);
    ArrivalStream arrivals(seed.u_seed);

    double best = std::numeric_limits<double>::infinity();
    std::uint64_t best_index = 0;
    std::uint64_t probes = 0;
    for (std::uint64_t t = 1;; ++t) {
        const double arrival = arrivals.next();
        // Every later candidate scores at least T_t / ratio_max.
        if (arrival > best * ratio_max) {
            break;
        }
        if (probes == probe_cap) {
            throw ProbeBudgetExceeded("pfr", probe_cap);
        }
        ++probes;
        for (std::size_t i = 0; i < k; ++i) {
            x[i] = eval_from_state(states[i], t, range);
        }
        const double r = ratio[detail::singleton_count(x, scratch)];
        if (r == 0.0) {
            continue;
        }
        const double score = arrival / r;
        if (score < best) {
            best = score;
            best_index = t;
        }
    }
    return EncodeResult{describe_index(code, best_index), best_index, std::nullopt, probes};
}

EncodeResult encode(const KeySet& a, const SharedSeed& seed, const SchemeConfig& config)
{
    if (a.size() != config.k) {
        throw std::invalid_argument("encode: |A| = " + std::to_string(a.size()) + " but config.k = " +
                                    std::to_string(config.k));
    }
    switch (config.kind) {
    case SchemeKind::perfect:
        return perfect_encode(a, seed, config.code, config.probe_cap);
    case SchemeKind::zero_bit:
        return zero_bit_encode(a, seed);
    case SchemeKind::mixture:
        return mixture_encode(a, seed, config.lambda, config.code, config.probe_cap);
    case SchemeKind::pfr:
        return pfr_encode(a, seed, config.urn(), config.code, config.probe_cap);
    }
    throw std::invalid_argument("encode: unknown scheme");
}

HashFunctionHandle decode(const BitString& description, const SharedSeed& seed, const SchemeConfig& config)
{
    const auto range = static_cast<std::uint32_t>(config.k);
    auto zero_handle = [&]() {
        if (!description.empty()) {
            throw DecodeError("zero-bit description must be empty");
        }
        return HashFunctionHandle{seed, 1, range};
    };
    switch (config.kind) {
    case SchemeKind::zero_bit:
        return zero_handle();
    case SchemeKind::mixture:
        if (mixture_branch(seed, config.lambda) == Branch::zero) {
            return zero_handle();
        }
        [[fallthrough]];
    case SchemeKind::perfect:
    case SchemeKind::pfr:
        return HashFunctionHandle{seed, read_index(config.code, description), range};
    }
    throw std::invalid_argument("decode: unknown scheme");
}

SchemeConfig make_scheme_config(std::uint64_t n, std::size_t k, double alpha, SchemeKind kind, CodeKind code_kind,
                                bool calibrated)
{
    if (k < 1 || k > n) {
        throw std::invalid_argument("make_scheme_config: need 1 <= k <= n");
    }
    SchemeConfig cfg;
    cfg.n = n;
    cfg.k = k;
    cfg.alpha = alpha;
    cfg.kind = kind;
    cfg.lambda = lambda_for_alpha(alpha);
    if (kind == SchemeKind::perfect) {
        cfg.lambda = 1.0;
    } else if (kind == SchemeKind::zero_bit) {
        cfg.lambda = 0.0;
    } else if (kind == SchemeKind::pfr && calibrated) {
        cfg.lambda = calibrated_lambda(k, alpha);
    }

    switch (code_kind) {
    case CodeKind::elias_gamma:
        cfg.code = IntegerCode::elias_gamma();
        break;
    case CodeKind::elias_delta:
        cfg.code = IntegerCode::elias_delta();
        break;
    case CodeKind::golomb: {
        const double p = kind == SchemeKind::pfr ? std::exp2(-max_log_ratio(cfg.urn()))
                                                 : perfect_success_probability(k);
        if (!(p > 0.0)) {
            throw std::invalid_argument("make_scheme_config: success probability underflows; k too large for golomb");
        }
        cfg.code = IntegerCode::golomb(p >= 1.0 ? 1 : golomb_parameter_for_geometric(p));
        break;
    }
    case CodeKind::empirical_shannon:
        throw std::invalid_argument("make_scheme_config: empirical codes are built from pilot samples");
    }
    return cfg;
}

}  // namespace alphahash
