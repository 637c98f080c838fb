#pragma once

// Encoder/decoder pairs for minimal alpha-perfect hashing.
//
// All four schemes share the hash-function stream C^(1), C^(2), ... named by
// SharedSeed::z_seed. The encoder picks an index into that stream and writes a
// prefix-free description of it; the decoder reads the index back and returns
// the matching handle.
//
//   perfect   first index whose function is injective on A
//   zero_bit  empty description, always C^(1)
//   mixture   perfect with probability lambda, otherwise zero_bit; the branch
//             is a function of the shared seed, never of the description
//   pfr       Poisson functional representation: argmin_t T_t / ratio(X^(t))
//             where ratio = r_lambda / uniform, so X^(K) ~ r_lambda exactly

#include "alphahash/codes.hpp"
#include "alphahash/core.hpp"
#include "alphahash/urn.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace alphahash {

inline constexpr std::uint64_t kDefaultProbeCap = 1'000'000'000ULL;

class ProbeBudgetExceeded : public std::runtime_error {
public:
    ProbeBudgetExceeded(const std::string& scheme, std::uint64_t cap)
        : std::runtime_error(scheme + ": probe budget of " + std::to_string(cap) + " hash functions exceeded"),
          cap_(cap)
    {
    }
    std::uint64_t cap() const { return cap_; }

private:
    std::uint64_t cap_;
};

enum class SchemeKind { perfect, zero_bit, mixture, pfr };
enum class Branch { perfect, zero };

std::string to_string(SchemeKind kind);
std::optional<SchemeKind> parse_scheme_kind(std::string_view name);

struct SchemeConfig {
    std::uint64_t n = 1;
    std::size_t k = 1;
    double alpha = 1.0;
    SchemeKind kind = SchemeKind::perfect;
    IntegerCode code = IntegerCode::elias_delta();
    /// Mixing probability (mixture) or urn parameter (pfr).
    double lambda = 1.0;
    std::uint64_t probe_cap = kDefaultProbeCap;

    UrnDistribution urn() const { return UrnDistribution(k, lambda); }
};

/// Builds a config with lambda = lambda_for_alpha(alpha) and the code of the
/// requested kind. Golomb parameters are matched to the scheme's index law:
/// success probability k!/k^k for perfect and mixture, 2^-max_log_ratio for
/// pfr. An empirical code must be supplied through `code_override`.
///
/// With `calibrated`, the pfr lambda is the smallest lattice point w/k whose
/// exact expected collision fraction is at most 1 - alpha.
SchemeConfig make_scheme_config(std::uint64_t n, std::size_t k, double alpha, SchemeKind kind, CodeKind code_kind,
                                bool calibrated = false);

struct EncodeResult {
    BitString description;
    std::optional<std::uint64_t> index;
    std::optional<Branch> branch;
    std::uint64_t probes = 0;
};

/// ((alpha - 1/e) / (1 - 1/e))^+
double lambda_for_alpha(double alpha);

/// Smallest w/k with exact E[d] <= 1 - alpha under r_{w/k}.
double calibrated_lambda(std::size_t k, double alpha);

/// k!/k^k in double precision.
double perfect_success_probability(std::size_t k);

/// Mixture branch derived from the shared seed: perfect iff u < lambda.
Branch mixture_branch(const SharedSeed& seed, double lambda);

EncodeResult perfect_encode(const KeySet& a, const SharedSeed& seed, const IntegerCode& code,
                            std::uint64_t probe_cap = kDefaultProbeCap);
EncodeResult zero_bit_encode(const KeySet& a, const SharedSeed& seed);
EncodeResult mixture_encode(const KeySet& a, const SharedSeed& seed, double lambda, const IntegerCode& code,
                            std::uint64_t probe_cap = kDefaultProbeCap);
EncodeResult pfr_encode(const KeySet& a, const SharedSeed& seed, const UrnDistribution& dist, const IntegerCode& code,
                        std::uint64_t probe_cap = kDefaultProbeCap);

/// Dispatches on config.kind. Throws std::invalid_argument if |a| != config.k.
EncodeResult encode(const KeySet& a, const SharedSeed& seed, const SchemeConfig& config);

/// Recovers the handle chosen by the encoder. Throws DecodeError on a
/// malformed description (trailing bits, non-empty zero-bit description, ...).
HashFunctionHandle decode(const BitString& description, const SharedSeed& seed, const SchemeConfig& config);

}  // namespace alphahash
