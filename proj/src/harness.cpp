#include "alphahash/harness.hpp"

#include "alphahash/bounds.hpp"
#include "alphahash/randomness.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <ostream>
#include <unordered_map>

namespace alphahash {

KeySet random_key_set(std::uint64_t n, std::size_t k, std::uint64_t seed)
{
    if (k < 1 || k > n) {
        throw std::invalid_argument("random_key_set: need 1 <= k <= n");
    }
    SplitMix64 rng(seed);
    // Virtual array a[i] = i + 1 with only the swapped slots stored.
    std::unordered_map<std::uint64_t, std::uint64_t> swapped;
    auto at = [&](std::uint64_t i) {
        const auto it = swapped.find(i);
        return it == swapped.end() ? i + 1 : it->second;
    };
    std::vector<std::uint64_t> keys;
    keys.reserve(k);
    for (std::uint64_t i = 0; i < k; ++i) {
        const std::uint64_t j = i + uniform_below(rng, n - i);
        const std::uint64_t vi = at(i);
        const std::uint64_t vj = at(j);
        swapped[j] = vi;
        keys.push_back(vj);
    }
    return KeySet(n, std::move(keys));
}

SharedSeed trial_seed(std::uint64_t base_seed, std::size_t keyset_id, std::size_t trial)
{
    return SharedSeed{prf(base_seed, kTrialZDomain, keyset_id, trial), prf(base_seed, kTrialUDomain, keyset_id, trial)};
}

TrialRecord run_trial(const KeySet& a, const SharedSeed& seed, const SchemeConfig& config)
{
    const EncodeResult enc = encode(a, seed, config);
    const HashFunctionHandle h = decode(enc.description, seed, config);
    const std::uint64_t selected = enc.index.value_or(1);
    if (h.index != selected || restriction(h.seed, h.index, a) != restriction(seed, selected, a)) {
        throw ExperimentError("round-trip mismatch: decoded index " + std::to_string(h.index) + ", encoder chose " +
                                  std::to_string(selected),
                              0, 0, seed);
    }
    return TrialRecord{enc.index.value_or(0), enc.description.size(), collision_fraction_set(a, h), enc.probes,
                       enc.branch};
}

double reference_bound_bits_per_key(const SchemeConfig& config)
{
    switch (config.kind) {
    case SchemeKind::perfect:
        return perfect_length_bound(config.k) / static_cast<double>(config.k);
    case SchemeKind::zero_bit:
        return 0.0;
    case SchemeKind::mixture:
        return mixture_rate_bound(config.alpha);
    case SchemeKind::pfr:
        return sampling_rate_bound(config.alpha);
    }
    return 0.0;
}

void validate(const ExperimentConfig& cfg)
{
    if (cfg.trials == 0) {
        throw std::invalid_argument("experiment needs at least one trial");
    }
    if (cfg.key_sets == 0) {
        throw std::invalid_argument("experiment needs at least one key set");
    }
    if (cfg.scheme.k < 1 || cfg.scheme.k > cfg.scheme.n) {
        throw std::invalid_argument("experiment needs 1 <= k <= n");
    }
}

void fit_empirical_code(ExperimentConfig& cfg)
{
    const auto& scheme = cfg.scheme;
    const std::size_t pilots = cfg.pilot_trials > 0 ? cfg.pilot_trials : cfg.trials;
    const KeySet pilot_set = random_key_set(scheme.n, scheme.k, prf(cfg.base_seed, kPilotDomain, 0));
    const IntegerCode scratch_code = IntegerCode::elias_delta();
    std::vector<std::uint64_t> indices(pilots, 1);
    std::vector<std::exception_ptr> errors(pilots);
    if (scheme.kind != SchemeKind::zero_bit) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(pilots); ++i) {
            const auto slot = static_cast<std::size_t>(i);
            const SharedSeed seed{prf(cfg.base_seed, kPilotDomain, 1, slot), prf(cfg.base_seed, kPilotDomain, 2, slot)};
            try {
                // The index law does not depend on the key set, and the
                // mixture's coded indices are exactly those of its perfect branch.
                const auto enc = scheme.kind == SchemeKind::pfr
                                     ? pfr_encode(pilot_set, seed, scheme.urn(), scratch_code, scheme.probe_cap)
                                     : perfect_encode(pilot_set, seed, scratch_code, scheme.probe_cap);
                indices[slot] = *enc.index;
            } catch (...) {
                errors[slot] = std::current_exception();
            }
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    cfg.scheme.code = build_empirical_code(indices);
}

namespace {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

template <class Get>
MeanSe mean_se(const std::vector<TrialRecord>& records, Get get)
{
    const double n = static_cast<double>(records.size());
    double sum = 0.0;
    for (const auto& r : records) {
        sum += get(r);
    }
    const double mean = sum / n;
    if (records.size() < 2) {
        return {mean, 0.0};
    }
    double ss = 0.0;
    for (const auto& r : records) {
        const double dev = get(r) - mean;
        ss += dev * dev;
    }
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

KeySetReport summarize(std::size_t keyset_id, std::vector<TrialRecord> records, const SchemeConfig& config)
{
    KeySetReport r;
    r.keyset_id = keyset_id;
    r.trials = records.size();
    const auto d = mean_se(records, [](const TrialRecord& t) { return t.d.to_double(); });
    const auto bits = mean_se(records, [](const TrialRecord& t) { return static_cast<double>(t.bits); });
    const auto probes = mean_se(records, [](const TrialRecord& t) { return static_cast<double>(t.probes); });
    r.mean_d = d.mean;
    r.se_d = d.se;
    r.mean_bits = bits.mean;
    r.se_bits = bits.se;
    r.bits_per_key = bits.mean / static_cast<double>(config.k);
    r.bound_bits_per_key = reference_bound_bits_per_key(config);
    r.mean_probes = probes.mean;
    for (const auto& t : records) {
        r.max_probes = std::max(r.max_probes, t.probes);
    }
    r.records = std::move(records);
    return r;
}

ExperimentReport make_report(const ExperimentConfig& cfg)
{
    ExperimentReport report;
    report.scheme = to_string(cfg.scheme.kind);
    report.n = cfg.scheme.n;
    report.k = cfg.scheme.k;
    report.alpha = cfg.scheme.alpha;
    report.lambda = cfg.scheme.lambda;
    report.code = to_string(cfg.scheme.code.kind());
    return report;
}

TrialRecord guarded_trial(const KeySet& a, const ExperimentConfig& cfg, std::size_t keyset_id, std::size_t trial)
{
    const SharedSeed seed = trial_seed(cfg.base_seed, keyset_id, trial);
    try {
        return run_trial(a, seed, cfg.scheme);
    } catch (const std::exception& e) {
        throw ExperimentError(e.what(), keyset_id, trial, seed);
    }
}

}  // namespace

KeySetReport ExperimentReport::pooled() const
{
    std::vector<TrialRecord> all;
    for (const auto& ks : key_sets) {
        all.insert(all.end(), ks.records.begin(), ks.records.end());
    }
    KeySetReport r;
    if (all.empty()) {
        return r;
    }
    SchemeConfig cfg;
    cfg.k = k;
    r = summarize(0, std::move(all), cfg);
    r.bound_bits_per_key = key_sets.front().bound_bits_per_key;
    return r;
}

ExperimentReport run_experiment_serial(const ExperimentConfig& cfg)
{
    validate(cfg);
    ExperimentReport report = make_report(cfg);
    for (std::size_t j = 0; j < cfg.key_sets; ++j) {
        const KeySet a = random_key_set(cfg.scheme.n, cfg.scheme.k, prf(cfg.base_seed, kKeySetDomain, j));
        std::vector<TrialRecord> records;
        records.reserve(cfg.trials);
        for (std::size_t t = 0; t < cfg.trials; ++t) {
            records.push_back(guarded_trial(a, cfg, j, t));
        }
        report.key_sets.push_back(summarize(j, std::move(records), cfg.scheme));
    }
    return report;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg)
{
    validate(cfg);
    ExperimentReport report = make_report(cfg);
    for (std::size_t j = 0; j < cfg.key_sets; ++j) {
        const KeySet a = random_key_set(cfg.scheme.n, cfg.scheme.k, prf(cfg.base_seed, kKeySetDomain, j));
        std::vector<TrialRecord> records(cfg.trials);
        std::vector<std::optional<ExperimentError>> errors(cfg.trials);
        const auto n_trials = static_cast<std::int64_t>(cfg.trials);
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t t = 0; t < n_trials; ++t) {
            const auto i = static_cast<std::size_t>(t);
            try {
                records[i] = guarded_trial(a, cfg, j, i);
            } catch (const ExperimentError& e) {
                errors[i] = e;
            }
        }
        // Report the lowest failing trial, as the serial loop would.
        for (auto& e : errors) {
            if (e) {
                throw *e;
            }
        }
        report.key_sets.push_back(summarize(j, std::move(records), cfg.scheme));
    }
    return report;
}

namespace {

std::string fixed6(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

void emit_report(const ExperimentReport& report, ReportFormat format, std::ostream& out)
{
    if (format == ReportFormat::csv) {
        out << "scheme,n,k,alpha,keyset_id,trials,mean_d,se_d,mean_bits,se_bits,bits_per_key,bound_bits_per_key\n";
        for (const auto& ks : report.key_sets) {
            out << report.scheme << ',' << report.n << ',' << report.k << ',' << fixed6(report.alpha) << ','
                << ks.keyset_id << ',' << ks.trials << ',' << fixed6(ks.mean_d) << ',' << fixed6(ks.se_d) << ','
                << fixed6(ks.mean_bits) << ',' << fixed6(ks.se_bits) << ',' << fixed6(ks.bits_per_key) << ','
                << fixed6(ks.bound_bits_per_key) << '\n';
        }
        return;
    }
    nlohmann::ordered_json j;
    j["scheme"] = report.scheme;
    j["n"] = report.n;
    j["k"] = report.k;
    j["alpha"] = report.alpha;
    j["lambda"] = report.lambda;
    j["code"] = report.code;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& ks : report.key_sets) {
        rows.push_back({{"keyset_id", ks.keyset_id},
                        {"trials", ks.trials},
                        {"mean_d", ks.mean_d},
                        {"se_d", ks.se_d},
                        {"mean_bits", ks.mean_bits},
                        {"se_bits", ks.se_bits},
                        {"bits_per_key", ks.bits_per_key},
                        {"bound_bits_per_key", ks.bound_bits_per_key},
                        {"mean_probes", ks.mean_probes},
                        {"max_probes", ks.max_probes}});
    }
    j["key_sets"] = std::move(rows);
    out << j.dump(2) << '\n';
}

void emit_report(const ExperimentReport& report, ReportFormat format, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    emit_report(report, format, out);
    if (!out) {
        throw std::runtime_error("write to " + path + " failed");
    }
}

}  // namespace alphahash
