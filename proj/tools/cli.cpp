#include "cli.hpp"

#include "alphahash/bounds.hpp"
#include "alphahash/harness.hpp"
#include "alphahash/oracle.hpp"
#include "alphahash/randomness.hpp"
#include "alphahash/schemes.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace alphahash::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const std::map<std::string, CodeKind> kCodeNames{
    {"gamma", CodeKind::elias_gamma},
    {"delta", CodeKind::elias_delta},
    {"golomb", CodeKind::golomb},
    {"empirical", CodeKind::empirical_shannon},
};

CodeKind default_code(SchemeKind kind)
{
    return kind == SchemeKind::pfr || kind == SchemeKind::zero_bit ? CodeKind::elias_delta : CodeKind::golomb;
}

struct SchemeOptions {
    std::string scheme;
    std::uint64_t n = 1'000'000;
    std::size_t k = 0;
    double alpha = 1.0;
    std::uint64_t seed = 0;
    std::string code;
    bool calibrated = false;
    std::uint64_t probe_cap = kDefaultProbeCap;
    std::size_t pilot = 1000;
};

void add_scheme_options(CLI::App& cmd, SchemeOptions& o)
{
    cmd.add_option("--scheme", o.scheme, "perfect | zero | mixture | pfr")->required()
        ->check(CLI::IsMember({"perfect", "zero", "mixture", "pfr"}));
    cmd.add_option("--n", o.n, "universe size")->capture_default_str();
    cmd.add_option("--alpha", o.alpha, "target alpha in [0, 1]")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    cmd.add_option("--seed", o.seed, "64-bit base seed")->capture_default_str();
    cmd.add_option("--code", o.code, "gamma | delta | golomb | empirical (default: golomb for perfect/mixture, delta for pfr)")
        ->check(CLI::IsMember({"gamma", "delta", "golomb", "empirical"}));
    cmd.add_flag("--calibrated", o.calibrated, "pfr: smallest lattice lambda meeting the collision budget exactly");
    cmd.add_option("--probe-cap", o.probe_cap, "maximum hash functions examined per encode")->capture_default_str();
    cmd.add_option("--pilot", o.pilot, "pilot runs used to fit an empirical code")->capture_default_str();
}

ExperimentConfig build_experiment(const SchemeOptions& o, std::size_t trials, std::size_t key_sets)
{
    const SchemeKind kind = *parse_scheme_kind(o.scheme);
    if (o.k < 1 || o.k > o.n) {
        throw UsageError("need 1 <= k <= n");
    }
    const CodeKind code = o.code.empty() ? default_code(kind) : kCodeNames.at(o.code);
    ExperimentConfig cfg;
    cfg.scheme = make_scheme_config(o.n, o.k, o.alpha, kind,
                                    code == CodeKind::empirical_shannon ? CodeKind::elias_delta : code, o.calibrated);
    cfg.scheme.probe_cap = o.probe_cap;
    cfg.trials = trials;
    cfg.key_sets = key_sets;
    cfg.base_seed = o.seed;
    cfg.pilot_trials = o.pilot;
    if (code == CodeKind::empirical_shannon) {
        fit_empirical_code(cfg);
    }
    return cfg;
}

std::vector<std::uint64_t> parse_keys(const std::string& text)
{
    std::vector<std::uint64_t> keys;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            keys.push_back(std::stoull(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::logic_error&) {
            throw UsageError("--keys: '" + item + "' is not a positive integer");
        }
    }
    if (keys.empty()) {
        throw UsageError("--keys: need at least one key");
    }
    return keys;
}

std::string hex(std::span<const std::uint8_t> bytes)
{
    std::ostringstream os;
    for (auto b : bytes) {
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(b);
    }
    return os.str();
}

template <class Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn)
{
    if (path.empty() || path == "-") {
        fn(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    fn(file);
    if (!file) {
        throw std::runtime_error("write to " + path + " failed");
    }
}

int cmd_sweep(std::size_t grid, const std::string& path, std::ostream& out)
{
    if (grid < 1) {
        throw UsageError("--grid must be at least 1");
    }
    const auto alphas = uniform_alpha_grid(grid);
    const auto points = sweep(alphas);
    with_output(path, out, [&](std::ostream& os) {
        os << "alpha,mixture_bits_per_key,sampling_bits_per_key\n";
        char line[128];
        for (const auto& p : points) {
            std::snprintf(line, sizeof line, "%.6f,%.6f,%.6f\n", p.alpha, p.mixture_bits_per_key,
                          p.sampling_bits_per_key);
            os << line;
        }
    });
    return kExitOk;
}

int cmd_simulate(const SchemeOptions& o, std::size_t trials, std::size_t key_sets, const std::string& path,
                 const std::string& format_name, std::ostream& out, std::ostream& err)
{
    if (trials < 1 || key_sets < 1) {
        throw UsageError("--trials and --keysets must be at least 1");
    }
    ReportFormat format = ReportFormat::csv;
    if (format_name == "json" || (format_name.empty() && path.size() > 5 && path.ends_with(".json"))) {
        format = ReportFormat::json;
    }
    const ExperimentConfig cfg = build_experiment(o, trials, key_sets);
    try {
        const auto report = run_experiment(cfg);
        with_output(path, out, [&](std::ostream& os) { emit_report(report, format, os); });
    } catch (const ExperimentError& e) {
        err << "simulate: " << e.what() << " (keyset " << e.keyset_id << ", trial " << e.trial << ", z_seed "
            << e.seed.z_seed << ", u_seed " << e.seed.u_seed << ")\n";
        return kExitVerificationFailed;
    }
    return kExitOk;
}

int cmd_roundtrip(SchemeOptions o, const std::string& keys_text, const std::string& path, std::ostream& out,
                  std::ostream& err)
{
    const KeySet a = [&] {
        auto keys = parse_keys(keys_text);
        try {
            return KeySet(o.n, std::move(keys));
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("--keys: ") + e.what());
        }
    }();
    o.k = a.size();
    const ExperimentConfig cfg = build_experiment(o, 1, 1);
    const SharedSeed seed = SharedSeed::from_u64(o.seed);

    const EncodeResult enc = encode(a, seed, cfg.scheme);
    const HashFunctionHandle h = decode(enc.description, seed, cfg.scheme);
    const auto container = serialize_description(cfg.scheme.code.kind(), enc.description);

    out << "scheme: " << to_string(cfg.scheme.kind) << "\n";
    out << "k: " << a.size() << "\n";
    out << "lambda: " << cfg.scheme.lambda << "\n";
    out << "code: " << to_string(cfg.scheme.code.kind()) << "\n";
    out << "description: " << (enc.description.empty() ? "(empty)" : enc.description.to_string()) << " ("
        << enc.description.size() << " bits)\n";
    out << "container: " << hex(container) << "\n";
    if (enc.branch) {
        out << "branch: " << (*enc.branch == Branch::perfect ? "perfect" : "zero") << "\n";
    }
    out << "index: " << h.index << "\n";
    out << "probes: " << enc.probes << "\n";
    const RestrictionVector decoded = restriction(h.seed, h.index, a);
    for (std::size_t i = 0; i < a.size(); ++i) {
        out << a[i] << " -> " << decoded[i] << "\n";
    }
    out << "collision_fraction: " << to_string(collision_fraction_set(a, h)) << "\n";

    if (!path.empty()) {
        std::ofstream file(path, std::ios::binary);
        file.write(reinterpret_cast<const char*>(container.data()), static_cast<std::streamsize>(container.size()));
        if (!file) {
            throw std::runtime_error("write to " + path + " failed");
        }
    }
    if (enc.index && (h.index != *enc.index || decoded != restriction(seed, *enc.index, a))) {
        err << "roundtrip: decoded handle does not match the encoder's selection\n";
        return kExitVerificationFailed;
    }
    return kExitOk;
}

int cmd_oracle_verify(std::size_t kmax, std::ostream& out)
{
    if (kmax < 1 || kmax > oracle::kMaxDistributionK) {
        throw UsageError("--kmax must be in [1, " + std::to_string(oracle::kMaxDistributionK) + "]");
    }
    const auto rows = oracle::verify_grid(kmax);
    std::size_t failed = 0;
    std::size_t informational = 0;
    out << std::left << std::setw(34) << "check" << std::setw(4) << "k" << std::setw(4) << "w" << std::setw(10)
        << "lambda" << std::setw(7) << "result" << "detail\n";
    for (const auto& r : rows) {
        const char* status = r.passed ? "pass" : (r.gated ? "FAIL" : "info");
        failed += (!r.passed && r.gated) ? 1 : 0;
        informational += (!r.passed && !r.gated) ? 1 : 0;
        std::ostringstream lam;
        lam << std::setprecision(4) << r.lambda;
        out << std::left << std::setw(34) << r.check << std::setw(4) << r.k << std::setw(4) << r.w << std::setw(10)
            << lam.str() << std::setw(7) << status << r.detail << "\n";
    }
    out << rows.size() << " checks, " << failed << " failed";
    if (informational > 0) {
        out << ", " << informational << " informational violations (entropy_bound_stated: bound evaluated at lambda with w = "
                                        "ceil(lambda k) > lambda k)";
    }
    out << "\n";
    return failed == 0 ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"alpha-perfect hashing: schemes, bounds and exact oracles", "alphahash"};
    app.require_subcommand(1);

    auto* bounds = app.add_subcommand("bounds", "closed-form space bounds");
    bounds->require_subcommand(1);
    auto* sweep_cmd = bounds->add_subcommand("sweep", "bits-per-key bounds on a uniform alpha grid");
    std::size_t grid = 101;
    std::string sweep_out;
    sweep_cmd->add_option("--grid", grid, "number of grid points on [0, 1]")->capture_default_str();
    sweep_cmd->add_option("--out", sweep_out, "output CSV (default: stdout)");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo encode/decode experiment");
    SchemeOptions sim;
    std::size_t trials = 1000;
    std::size_t key_sets = 1;
    std::string sim_out;
    std::string sim_format;
    add_scheme_options(*simulate, sim);
    simulate->add_option("--k", sim.k, "key set size")->required();
    simulate->add_option("--trials", trials, "trials per key set")->capture_default_str();
    simulate->add_option("--keysets", key_sets, "number of random key sets")->capture_default_str();
    simulate->add_option("--out", sim_out, "output file (default: stdout)");
    simulate->add_option("--format", sim_format, "csv | json (default: from --out extension, else csv)")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* roundtrip = app.add_subcommand("roundtrip", "encode and decode one key set");
    SchemeOptions rt;
    std::string keys_text;
    std::string rt_out;
    add_scheme_options(*roundtrip, rt);
    roundtrip->add_option("--keys", keys_text, "comma-separated keys, e.g. 3,17,99")->required();
    roundtrip->add_option("--out", rt_out, "write the binary description container here");

    auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive small-k verification");
    oracle_cmd->require_subcommand(1);
    auto* verify = oracle_cmd->add_subcommand("verify", "run the full oracle grid");
    std::size_t kmax = 5;
    verify->add_option("--kmax", kmax, "largest k to enumerate")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);  // --help on any subcommand
            return kExitOk;
        }
        err << "alphahash: " << e.what() << "\n" << "run with --help for usage\n";
        return kExitUsage;
    }

    try {
        if (*sweep_cmd) {
            return cmd_sweep(grid, sweep_out, out);
        }
        if (*simulate) {
            return cmd_simulate(sim, trials, key_sets, sim_out, sim_format, out, err);
        }
        if (*roundtrip) {
            return cmd_roundtrip(rt, keys_text, rt_out, out, err);
        }
        if (*verify) {
            return cmd_oracle_verify(kmax, out);
        }
    } catch (const UsageError& e) {
        err << "alphahash: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "alphahash: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "alphahash: " << e.what() << "\n";
        return kExitVerificationFailed;
    }
    return kExitUsage;
}

}  // namespace alphahash::cli
