#include "alphahash/oracle.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace alphahash::oracle {

namespace {

using boost::multiprecision::cpp_int;

using Vec = std::vector<std::uint32_t>;

std::uint64_t ipow(std::uint64_t base, std::size_t exp)
{
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        r *= base;
    }
    return r;
}

// Mixed-radix index of a vector in [k]^k (entries 1-based).
std::size_t encode_vec(const Vec& v, std::size_t k)
{
    std::size_t idx = 0;
    for (auto x : v) {
        idx = idx * k + (x - 1);
    }
    return idx;
}

Vec decode_vec(std::size_t idx, std::size_t k)
{
    Vec v(k);
    for (std::size_t i = k; i-- > 0;) {
        v[i] = static_cast<std::uint32_t>(idx % k) + 1;
        idx /= k;
    }
    return v;
}

// All ordered sequences of w distinct values from [k].
std::vector<Vec> ordered_prefixes(std::size_t k, std::size_t w)
{
    std::vector<Vec> out;
    Vec current;
    std::vector<bool> used(k + 1, false);
    auto rec = [&](auto& self) -> void {
        if (current.size() == w) {
            out.push_back(current);
            return;
        }
        for (std::uint32_t v = 1; v <= k; ++v) {
            if (!used[v]) {
                used[v] = true;
                current.push_back(v);
                self(self);
                current.pop_back();
                used[v] = false;
            }
        }
    };
    rec(rec);
    return out;
}

std::vector<std::vector<std::size_t>> all_permutations(std::size_t k)
{
    std::vector<std::size_t> p(k);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<std::size_t>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

void require_k(std::size_t k, std::size_t w, std::size_t cap)
{
    if (k < 1 || k > cap) {
        throw std::invalid_argument("oracle: k = " + std::to_string(k) + " outside [1, " + std::to_string(cap) + "]");
    }
    if (w > k) {
        throw std::invalid_argument("oracle: w exceeds k");
    }
}

// Calls fn(y) for every pre-permutation outcome extending `prefix`.
template <class Fn>
void for_each_suffix(const Vec& prefix, std::size_t k, Fn&& fn)
{
    const std::size_t w = prefix.size();
    const std::size_t m = k - w;
    Vec remaining;
    for (std::uint32_t v = 1; v <= k; ++v) {
        if (std::find(prefix.begin(), prefix.end(), v) == prefix.end()) {
            remaining.push_back(v);
        }
    }
    Vec y = prefix;
    y.resize(k);
    const std::uint64_t suffixes = ipow(m, m);  // 0^0 = 1
    for (std::uint64_t s = 0; s < suffixes; ++s) {
        std::uint64_t code = s;
        for (std::size_t i = 0; i < m; ++i) {
            y[w + i] = remaining[code % m];
            code /= m;
        }
        fn(y);
    }
}

void accumulate_prefix(const Vec& prefix, std::size_t k, const std::vector<std::vector<std::size_t>>& perms,
                       std::vector<std::uint64_t>& counts)
{
    Vec x(k);
    for_each_suffix(prefix, k, [&](const Vec& y) {
        for (const auto& pi : perms) {
            for (std::size_t i = 0; i < k; ++i) {
                x[i] = y[pi[i]];
            }
            ++counts[encode_vec(x, k)];
        }
    });
}

ExactDistribution from_counts(const std::vector<std::uint64_t>& counts, std::size_t k)
{
    const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    ExactDistribution dist;
    dist.k = k;
    for (std::size_t idx = 0; idx < counts.size(); ++idx) {
        if (counts[idx] != 0) {
            dist.support.emplace_back(RestrictionVector(decode_vec(idx, k)), BigRational(counts[idx], total));
        }
    }
    return dist;
}

// Collision indicator computed by pairwise comparison, independent of core.
std::vector<std::uint8_t> indicator(const RestrictionVector& x)
{
    std::vector<std::uint8_t> v(x.size(), 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (i != j && x[i] == x[j]) {
                v[i] = 1;
            }
        }
    }
    return v;
}

HighFloat log2_high(const HighFloat& x) { return log(x) / boost::math::constants::ln_two<HighFloat>(); }

// Sum over the support of p log2(P(group) / p), grouping by collision indicator.
HighFloat conditional_entropy_given_indicator(const ExactDistribution& dist)
{
    std::map<std::vector<std::uint8_t>, BigRational> group_mass;
    for (const auto& [x, p] : dist.support) {
        group_mass[indicator(x)] += p;
    }
    HighFloat h = 0;
    for (const auto& [x, p] : dist.support) {
        const auto& g = group_mass[indicator(x)];
        h += to_high(p) * log2_high(to_high(g / p));
    }
    return h;
}

}  // namespace

HighFloat to_high(const BigRational& r)
{
    return HighFloat(numerator(r)) / HighFloat(denominator(r));
}

BigRational ExactDistribution::mass(const RestrictionVector& x) const
{
    const auto it = std::lower_bound(support.begin(), support.end(), x,
                                     [](const auto& entry, const RestrictionVector& v) { return entry.first < v; });
    if (it != support.end() && it->first == x) {
        return it->second;
    }
    return BigRational(0);
}

BigRational ExactDistribution::total() const
{
    BigRational t = 0;
    for (const auto& entry : support) {
        t += entry.second;
    }
    return t;
}

ExactDistribution enumerate_r_lambda_serial(std::size_t k, std::size_t w)
{
    require_k(k, w, kMaxDistributionK);
    const auto perms = all_permutations(k);
    std::vector<std::uint64_t> counts(ipow(k, k), 0);
    for (const auto& prefix : ordered_prefixes(k, w)) {
        accumulate_prefix(prefix, k, perms, counts);
    }
    return from_counts(counts, k);
}

ExactDistribution enumerate_r_lambda(std::size_t k, std::size_t w)
{
    require_k(k, w, kMaxDistributionK);
    const auto perms = all_permutations(k);
    const auto prefixes = ordered_prefixes(k, w);
    const std::size_t cells = ipow(k, k);
    std::vector<std::uint64_t> counts(cells, 0);
    const auto n_prefixes = static_cast<std::int64_t>(prefixes.size());

#pragma omp parallel
    {
        std::vector<std::uint64_t> local(cells, 0);
#pragma omp for schedule(dynamic)
        for (std::int64_t i = 0; i < n_prefixes; ++i) {
            accumulate_prefix(prefixes[static_cast<std::size_t>(i)], k, perms, local);
        }
#pragma omp critical
        for (std::size_t c = 0; c < cells; ++c) {
            counts[c] += local[c];
        }
    }
    return from_counts(counts, k);
}

ExactDistribution enumerate_pre_permutation(std::size_t k, std::size_t w)
{
    require_k(k, w, kMaxDistributionK);
    std::vector<std::uint64_t> counts(ipow(k, k), 0);
    for (const auto& prefix : ordered_prefixes(k, w)) {
        for_each_suffix(prefix, k, [&](const Vec& y) { ++counts[encode_vec(y, k)]; });
    }
    return from_counts(counts, k);
}

HighFloat exact_entropy_hp(const ExactDistribution& dist)
{
    HighFloat h = 0;
    for (const auto& [x, p] : dist.support) {
        const HighFloat hp = to_high(p);
        h -= hp * log2_high(hp);
    }
    return h;
}

double exact_entropy(const ExactDistribution& dist) { return static_cast<double>(exact_entropy_hp(dist)); }

double exact_pre_permutation_entropy(std::size_t k, std::size_t w)
{
    require_k(k, w, kMaxDistributionK);
    HighFloat h = 0;
    for (std::size_t i = 0; i < w; ++i) {
        h += log2_high(HighFloat(k - i));
    }
    const std::size_t m = k - w;
    if (m > 0) {
        h += HighFloat(m) * log2_high(HighFloat(m));
    }
    return static_cast<double>(h);
}

BigRational exact_expected_distortion(const ExactDistribution& dist)
{
    BigRational e = 0;
    for (const auto& [x, p] : dist.support) {
        const auto v = indicator(x);
        e += p * BigRational(std::count(v.begin(), v.end(), 1), x.size());
    }
    return e;
}

ConditionalEntropyCheck conditional_entropy_identity_check(std::size_t k, std::size_t w)
{
    require_k(k, w, kMaxJointK);
    const HighFloat lhs = conditional_entropy_given_indicator(enumerate_r_lambda(k, w));
    const HighFloat rhs = conditional_entropy_given_indicator(enumerate_pre_permutation(k, w));
    ConditionalEntropyCheck out;
    out.lhs = static_cast<double>(lhs);
    out.rhs = static_cast<double>(rhs);
    out.equal = abs(lhs - rhs) <= HighFloat(1e-12);
    return out;
}

BigRational exact_perfect_index_law(std::size_t k)
{
    require_k(k, 0, kMaxIndexLawK);
    const std::uint64_t cells = ipow(k, k);
    std::uint64_t injective = 0;
    std::vector<bool> seen(k);
    for (std::uint64_t idx = 0; idx < cells; ++idx) {
        std::fill(seen.begin(), seen.end(), false);
        std::uint64_t code = idx;
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i) {
            const auto v = code % k;
            code /= k;
            ok = !seen[v];
            seen[v] = true;
        }
        injective += ok ? 1 : 0;
    }
    return BigRational(injective, cells);
}

namespace {

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

std::vector<VerifyRow> verify_grid(std::size_t kmax)
{
    if (kmax < 1 || kmax > kMaxDistributionK) {
        throw std::invalid_argument("verify_grid: kmax must be in [1, " + std::to_string(kMaxDistributionK) + "]");
    }
    const HighFloat one_minus_inv_e = 1 - 1 / boost::math::constants::e<HighFloat>();
    const HighFloat log2e = 1 / boost::math::constants::ln_two<HighFloat>();
    constexpr double kEntropyTol = 1e-9;

    std::vector<VerifyRow> rows;
    auto add = [&](std::string check, std::size_t k, std::size_t w, double lambda, bool passed, std::string detail,
                   bool gated = true) {
        rows.push_back({std::move(check), k, w, lambda, passed, gated, std::move(detail)});
    };

    for (std::size_t k = 1; k <= kmax; ++k) {
        std::vector<ExactDistribution> by_w;
        std::vector<HighFloat> entropy_x;
        for (std::size_t w = 0; w <= k; ++w) {
            by_w.push_back(enumerate_r_lambda(k, w));
            entropy_x.push_back(exact_entropy_hp(by_w.back()));
        }

        for (std::size_t w = 0; w <= k; ++w) {
            const auto& dist = by_w[w];
            const auto urn = UrnDistribution::from_w(k, w);
            const double lambda = urn.lambda();

            bool pmf_ok = true;
            const std::size_t cells = ipow(k, k);
            for (std::size_t idx = 0; idx < cells && pmf_ok; ++idx) {
                const RestrictionVector x(decode_vec(idx, k));
                pmf_ok = pmf(urn, x) == dist.mass(x);
            }
            add("pmf_closed_form", k, w, lambda, pmf_ok, "all " + std::to_string(cells) + " vectors");
            add("normalization", k, w, lambda, dist.total() == 1, "sum = " + dist.total().str());

            const auto y_dist = enumerate_pre_permutation(k, w);
            const HighFloat h_y = exact_entropy_hp(y_dist);
            const double h_y_formula = exact_pre_permutation_entropy(k, w);
            add("pre_permutation_entropy", k, w, lambda,
                abs(h_y - HighFloat(h_y_formula)) <= HighFloat(1e-12),
                "enumerated " + fmt(static_cast<double>(h_y)) + " formula " + fmt(h_y_formula));
            const HighFloat stirling = HighFloat(k) * log2_high(HighFloat(k)) - HighFloat(w) * log2e;
            add("stirling_lower_bound", k, w, lambda, h_y >= stirling - HighFloat(kEntropyTol),
                "H(Y) " + fmt(static_cast<double>(h_y)) + " >= " + fmt(static_cast<double>(stirling)));
            add("permutation_gain", k, w, lambda, entropy_x[w] >= h_y - HighFloat(kEntropyTol),
                "H(X) " + fmt(static_cast<double>(entropy_x[w])) + " >= H(Y)");

            const BigRational ed = exact_expected_distortion(dist);
            add("expected_distortion_closed_form", k, w, lambda, ed == expected_distortion(urn), "E[d] = " + ed.str());
            add("distortion_bound_lattice", k, w, lambda,
                to_high(ed) <= one_minus_inv_e * (1 - to_high(BigRational(w, k))),
                "E[d] " + fmt(static_cast<double>(to_high(ed))) + " <= " + fmt(urn_distortion_bound(urn)));
            const double l3 = urn_entropy_lower_bound(urn);
            add("entropy_bound_lattice", k, w, lambda, entropy_x[w] >= HighFloat(l3) - HighFloat(kEntropyTol),
                "H(X) " + fmt(static_cast<double>(entropy_x[w])) + " >= " + fmt(l3));

            if (k <= kMaxJointK) {
                const auto c = conditional_entropy_identity_check(k, w);
                add("conditional_entropy_identity", k, w, lambda, c.equal,
                    "H(X|v) " + fmt(c.lhs) + " H(Y|v) " + fmt(c.rhs));
            }
        }

        for (double lambda : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const UrnDistribution urn(k, lambda);
            const std::size_t w = urn.w();
            const BigRational ed = exact_expected_distortion(by_w[w]);
            add("distortion_bound", k, w, lambda, to_high(ed) <= one_minus_inv_e * (1 - HighFloat(lambda)),
                "E[d] " + fmt(static_cast<double>(to_high(ed))) + " <= " + fmt(urn_distortion_bound(urn)));
            const double l3 = urn_entropy_lower_bound(urn);
            add("entropy_bound_stated", k, w, lambda, entropy_x[w] >= HighFloat(l3) - HighFloat(kEntropyTol),
                "H(X) " + fmt(static_cast<double>(entropy_x[w])) + " >= " + fmt(l3), false);
        }
    }
    return rows;
}

}  // namespace alphahash::oracle
