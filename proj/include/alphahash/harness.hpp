#pragma once

// Monte Carlo driver: random key sets, seeded trials, encode/decode
// round-trips and per-key-set statistics.
//
// Seeds are derived, never drawn: key set j uses prf(base, kKeySetDomain, j)
// and trial t of key set j uses SharedSeed{prf(base, kTrialZDomain, j, t),
// prf(base, kTrialUDomain, j, t)}. Trials run under OpenMP and are reduced in
// trial order, so reports do not depend on the thread count.

#include "alphahash/core.hpp"
#include "alphahash/schemes.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace alphahash {

inline constexpr std::uint64_t kKeySetDomain = 0x6b657973'65747321ULL;
inline constexpr std::uint64_t kTrialZDomain = 0x74726961'6c5f7a21ULL;
inline constexpr std::uint64_t kTrialUDomain = 0x74726961'6c5f7521ULL;
inline constexpr std::uint64_t kPilotDomain = 0x70696c6f'74212121ULL;

struct ExperimentConfig {
    SchemeConfig scheme;
    std::size_t trials = 1;
    std::size_t key_sets = 1;
    std::uint64_t base_seed = 0;
    /// Pilot runs used to fit an empirical index code (two-pass mode).
    std::size_t pilot_trials = 0;
};

struct TrialRecord {
    std::uint64_t index = 0;  // 0 when the description carries no index
    std::size_t bits = 0;
    Fraction d;
    std::uint64_t probes = 0;
    std::optional<Branch> branch;
};

struct KeySetReport {
    std::size_t keyset_id = 0;
    std::size_t trials = 0;
    double mean_d = 0.0;
    double se_d = 0.0;
    double mean_bits = 0.0;
    double se_bits = 0.0;
    double bits_per_key = 0.0;
    double bound_bits_per_key = 0.0;
    double mean_probes = 0.0;
    std::uint64_t max_probes = 0;
    std::vector<TrialRecord> records;
};

struct ExperimentReport {
    std::string scheme;
    std::uint64_t n = 0;
    std::size_t k = 0;
    double alpha = 0.0;
    double lambda = 0.0;
    std::string code;
    std::vector<KeySetReport> key_sets;

    /// Statistics pooled over every trial of every key set.
    KeySetReport pooled() const;
};

/// Raised when a trial cannot complete; carries what is needed to replay it.
class ExperimentError : public std::runtime_error {
public:
    ExperimentError(const std::string& what, std::size_t keyset_id, std::size_t trial, SharedSeed seed)
        : std::runtime_error(what), keyset_id(keyset_id), trial(trial), seed(seed)
    {
    }
    std::size_t keyset_id;
    std::size_t trial;
    SharedSeed seed;
};

/// Uniform k-subset of [1, n] via a sparse partial Fisher-Yates shuffle.
KeySet random_key_set(std::uint64_t n, std::size_t k, std::uint64_t seed);

SharedSeed trial_seed(std::uint64_t base_seed, std::size_t keyset_id, std::size_t trial);

/// One encode/decode round-trip; throws ExperimentError if the decoded
/// restriction differs from the encoder's selection.
TrialRecord run_trial(const KeySet& a, const SharedSeed& seed, const SchemeConfig& config);

/// Bits-per-key comparison value for the scheme's report rows.
double reference_bound_bits_per_key(const SchemeConfig& config);

/// Replaces cfg.scheme.code by an empirical code fitted to pilot indices.
void fit_empirical_code(ExperimentConfig& cfg);

/// Throws std::invalid_argument for trials == 0 or key_sets == 0.
void validate(const ExperimentConfig& cfg);

ExperimentReport run_experiment(const ExperimentConfig& cfg);
ExperimentReport run_experiment_serial(const ExperimentConfig& cfg);

enum class ReportFormat { csv, json };

void emit_report(const ExperimentReport& report, ReportFormat format, std::ostream& out);
/// Writes to `path`; throws std::runtime_error on I/O failure.
void emit_report(const ExperimentReport& report, ReportFormat format, const std::string& path);

}  // namespace alphahash
