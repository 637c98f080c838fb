#include "alphahash/codes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace alphahash {

BitString BitString::from_string(std::string_view bits)
{
    BitString out;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("BitString::from_string: expected only '0' and '1'");
        }
        out.push_back(c == '1');
    }
    return out;
}

BitString BitString::from_bytes(std::vector<std::uint8_t> bytes, std::size_t bit_length)
{
    if ((bit_length + 7) / 8 != bytes.size()) {
        throw std::invalid_argument("BitString::from_bytes: byte count does not match bit length");
    }
    BitString out;
    out.bytes_ = std::move(bytes);
    out.bit_length_ = bit_length;
    return out;
}

void BitString::push_back(bool bit)
{
    if ((bit_length_ & 7) == 0) {
        bytes_.push_back(0);
    }
    if (bit) {
        bytes_.back() |= static_cast<std::uint8_t>(0x80U >> (bit_length_ & 7));
    }
    ++bit_length_;
}

void BitString::append_bits(std::uint64_t value, unsigned count)
{
    for (unsigned i = count; i-- > 0;) {
        push_back((value >> i) & 1U);
    }
}

void BitString::append(const BitString& other)
{
    for (std::size_t i = 0; i < other.size(); ++i) {
        push_back(other[i]);
    }
}

bool BitString::is_prefix_of(const BitString& other) const
{
    if (size() > other.size()) {
        return false;
    }
    for (std::size_t i = 0; i < size(); ++i) {
        if ((*this)[i] != other[i]) {
            return false;
        }
    }
    return true;
}

std::string BitString::to_string() const
{
    std::string s;
    s.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
        s.push_back((*this)[i] ? '1' : '0');
    }
    return s;
}

bool BitReader::read_bit()
{
    if (pos_ >= bits_->size()) {
        throw DecodeError("unexpected end of bit string");
    }
    return (*bits_)[pos_++];
}

std::uint64_t BitReader::read_bits(unsigned count)
{
    std::uint64_t v = 0;
    for (unsigned i = 0; i < count; ++i) {
        v = (v << 1) | (read_bit() ? 1U : 0U);
    }
    return v;
}

std::string to_string(CodeKind kind)
{
    switch (kind) {
    case CodeKind::elias_gamma:
        return "gamma";
    case CodeKind::elias_delta:
        return "delta";
    case CodeKind::golomb:
        return "golomb";
    case CodeKind::empirical_shannon:
        return "empirical";
    }
    return "unknown";
}

IntegerCode IntegerCode::golomb(std::uint64_t m)
{
    if (m < 1) {
        throw std::invalid_argument("Golomb parameter must be >= 1");
    }
    IntegerCode c(CodeKind::golomb);
    c.golomb_m_ = m;
    return c;
}

IntegerCode IntegerCode::empirical(std::shared_ptr<const EmpiricalTable> table)
{
    if (!table) {
        throw std::invalid_argument("empirical code needs a table");
    }
    IntegerCode c(CodeKind::empirical_shannon);
    c.table_ = std::move(table);
    return c;
}

namespace {

unsigned floor_log2(std::uint64_t t) { return static_cast<unsigned>(std::bit_width(t)) - 1; }

void require_positive(std::uint64_t t)
{
    if (t < 1) {
        throw std::invalid_argument("integer codes are defined for t >= 1");
    }
}

void gamma_encode(std::uint64_t t, BitString& out)
{
    const unsigned n = floor_log2(t);
    out.append_bits(0, n);
    out.append_bits(t, n + 1);
}

std::uint64_t gamma_decode(BitReader& in)
{
    unsigned zeros = 0;
    while (!in.read_bit()) {
        if (++zeros > 63) {
            throw DecodeError("Elias gamma prefix longer than 63 zeros");
        }
    }
    return (std::uint64_t{1} << zeros) | in.read_bits(zeros);
}

void delta_encode(std::uint64_t t, BitString& out)
{
    const unsigned n = floor_log2(t);
    gamma_encode(n + 1, out);
    out.append_bits(t, n);
}

std::uint64_t delta_decode(BitReader& in)
{
    const std::uint64_t len = gamma_decode(in);
    if (len > 64) {
        throw DecodeError("Elias delta length field exceeds 64");
    }
    const auto n = static_cast<unsigned>(len - 1);
    return (std::uint64_t{1} << n) | in.read_bits(n);
}

// Truncated-binary parameters for remainders in [0, m).
struct Truncated {
    unsigned bits;
    std::uint64_t cutoff;
};

Truncated truncated_params(std::uint64_t m)
{
    if (m == 1) {
        return {0, 0};
    }
    const auto b = static_cast<unsigned>(std::bit_width(m - 1));
    const std::uint64_t cutoff = (b == 64 ? 0 : (std::uint64_t{1} << b)) - m;
    return {b, cutoff};
}

void golomb_encode(std::uint64_t m, std::uint64_t t, BitString& out)
{
    const std::uint64_t v = t - 1;
    const std::uint64_t q = v / m;
    const std::uint64_t r = v % m;
    for (std::uint64_t i = 0; i < q; ++i) {
        out.push_back(false);
    }
    out.push_back(true);
    const auto [b, cutoff] = truncated_params(m);
    if (b == 0) {
        return;
    }
    if (r < cutoff) {
        out.append_bits(r, b - 1);
    } else {
        out.append_bits(r + cutoff, b);
    }
}

std::uint64_t golomb_decode(std::uint64_t m, BitReader& in)
{
    std::uint64_t q = 0;
    while (!in.read_bit()) {
        ++q;
    }
    const auto [b, cutoff] = truncated_params(m);
    std::uint64_t r = 0;
    if (b > 0) {
        r = in.read_bits(b - 1);
        if (r >= cutoff) {
            r = ((r << 1) | (in.read_bit() ? 1U : 0U)) - cutoff;
        }
    }
    if (q > (std::numeric_limits<std::uint64_t>::max() - r - 1) / m) {
        throw DecodeError("Golomb codeword overflows 64 bits");
    }
    return q * m + r + 1;
}

std::size_t golomb_length(std::uint64_t m, std::uint64_t t)
{
    const std::uint64_t v = t - 1;
    const auto [b, cutoff] = truncated_params(m);
    const std::size_t rem = b == 0 ? 0 : (v % m < cutoff ? b - 1 : b);
    return static_cast<std::size_t>(v / m) + 1 + rem;
}

void empirical_encode(const EmpiricalTable& table, std::uint64_t t, BitString& out)
{
    if (auto it = table.entries.find(t); it != table.entries.end()) {
        out.append_bits(it->second.codeword, it->second.length);
        return;
    }
    out.append_bits(table.escape.codeword, table.escape.length);
    delta_encode(t, out);
}

std::uint64_t empirical_decode(const EmpiricalTable& table, BitReader& in)
{
    std::uint64_t code = 0;
    for (std::size_t len = 1; len < table.count.size(); ++len) {
        code = (code << 1) | (in.read_bit() ? 1U : 0U);
        if (table.count[len] != 0 && code >= table.first_code[len] &&
            code - table.first_code[len] < table.count[len]) {
            const std::uint64_t symbol = table.symbols[table.first_index[len] + (code - table.first_code[len])];
            return symbol == 0 ? delta_decode(in) : symbol;
        }
    }
    throw DecodeError("no empirical codeword matches the input");
}

}  // namespace

void encode_int(const IntegerCode& code, std::uint64_t t, BitString& out)
{
    require_positive(t);
    switch (code.kind()) {
    case CodeKind::elias_gamma:
        gamma_encode(t, out);
        return;
    case CodeKind::elias_delta:
        delta_encode(t, out);
        return;
    case CodeKind::golomb:
        golomb_encode(code.golomb_m(), t, out);
        return;
    case CodeKind::empirical_shannon:
        empirical_encode(*code.table(), t, out);
        return;
    }
}

BitString encode_int(const IntegerCode& code, std::uint64_t t)
{
    BitString out;
    encode_int(code, t, out);
    return out;
}

std::uint64_t decode_int(const IntegerCode& code, BitReader& reader)
{
    switch (code.kind()) {
    case CodeKind::elias_gamma:
        return gamma_decode(reader);
    case CodeKind::elias_delta:
        return delta_decode(reader);
    case CodeKind::golomb:
        return golomb_decode(code.golomb_m(), reader);
    case CodeKind::empirical_shannon:
        return empirical_decode(*code.table(), reader);
    }
    throw DecodeError("unknown code kind");
}

DecodedInt decode_int(const IntegerCode& code, const BitString& bits)
{
    if (bits.empty()) {
        throw DecodeError("cannot decode an integer from an empty bit string");
    }
    BitReader reader(bits);
    const auto value = decode_int(code, reader);
    return {value, reader.position()};
}

std::size_t codeword_length(const IntegerCode& code, std::uint64_t t)
{
    require_positive(t);
    const unsigned n = floor_log2(t);
    switch (code.kind()) {
    case CodeKind::elias_gamma:
        return 2 * n + 1;
    case CodeKind::elias_delta:
        return n + 2 * floor_log2(n + 1) + 1;
    case CodeKind::golomb:
        return golomb_length(code.golomb_m(), t);
    case CodeKind::empirical_shannon: {
        const auto& table = *code.table();
        if (auto it = table.entries.find(t); it != table.entries.end()) {
            return it->second.length;
        }
        return table.escape.length + n + 2 * floor_log2(n + 1) + 1;
    }
    }
    return 0;
}

std::uint64_t golomb_parameter_for_geometric(double success_prob)
{
    if (!(success_prob > 0.0 && success_prob < 1.0)) {
        throw std::invalid_argument("golomb_parameter_for_geometric: p must be in (0, 1)");
    }
    const double theta = 1.0 - success_prob;
    const double m = std::ceil(std::log1p(theta) / -std::log1p(-success_prob));
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(m));
}

namespace {

// Smallest L with c * 2^L >= total.
unsigned shannon_length(std::uint64_t c, std::uint64_t total)
{
    unsigned len = 0;
    unsigned __int128 scaled = c;
    while (scaled < total) {
        scaled <<= 1;
        ++len;
    }
    return len;
}

}  // namespace

IntegerCode build_empirical_code(std::span<const std::uint64_t> samples)
{
    if (samples.empty()) {
        throw std::invalid_argument("build_empirical_code: need at least one sample");
    }
    std::map<std::uint64_t, std::uint64_t> counts;
    for (auto s : samples) {
        require_positive(s);
        ++counts[s];
    }
    const std::uint64_t total = samples.size() + 1;

    // (length, symbol); symbol 0 is the escape and sorts first within its length.
    std::vector<std::pair<unsigned, std::uint64_t>> order;
    order.reserve(counts.size() + 1);
    for (const auto& [value, c] : counts) {
        order.emplace_back(shannon_length(c, total), value);
    }
    order.emplace_back(shannon_length(1, total), 0);
    std::sort(order.begin(), order.end());

    auto table = std::make_shared<EmpiricalTable>();
    const unsigned max_len = order.back().first;
    if (max_len > 63) {
        throw std::invalid_argument("build_empirical_code: too many samples");
    }
    table->first_code.assign(max_len + 1, 0);
    table->first_index.assign(max_len + 1, 0);
    table->count.assign(max_len + 1, 0);

    std::uint64_t code = 0;
    unsigned prev_len = order.front().first;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto [len, symbol] = order[i];
        code <<= (len - prev_len);
        prev_len = len;
        if (table->count[len] == 0) {
            table->first_code[len] = code;
            table->first_index[len] = static_cast<std::uint32_t>(i);
        }
        ++table->count[len];
        table->symbols.push_back(symbol);
        const EmpiricalTable::Entry entry{code, len};
        if (symbol == 0) {
            table->escape = entry;
        } else {
            table->entries.emplace(symbol, entry);
        }
        ++code;
    }
    return IntegerCode::empirical(std::move(table));
}

std::vector<std::uint8_t> serialize_description(CodeKind kind, const BitString& bits)
{
    if (bits.size() > 0xFFFFFFFFULL) {
        throw std::length_error("description longer than 2^32 - 1 bits");
    }
    const auto n = static_cast<std::uint32_t>(bits.size());
    std::vector<std::uint8_t> out{static_cast<std::uint8_t>(kind),
                                  static_cast<std::uint8_t>(n >> 24),
                                  static_cast<std::uint8_t>(n >> 16),
                                  static_cast<std::uint8_t>(n >> 8),
                                  static_cast<std::uint8_t>(n)};
    out.insert(out.end(), bits.bytes().begin(), bits.bytes().end());
    return out;
}

ParsedDescription parse_description(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < 5) {
        throw DecodeError("description shorter than its 5-byte header");
    }
    if (bytes[0] > static_cast<std::uint8_t>(CodeKind::empirical_shannon)) {
        throw DecodeError("unknown code kind byte " + std::to_string(bytes[0]));
    }
    const std::size_t n = (std::size_t{bytes[1]} << 24) | (std::size_t{bytes[2]} << 16) |
                          (std::size_t{bytes[3]} << 8) | std::size_t{bytes[4]};
    const auto payload = bytes.subspan(5);
    if (payload.size() != (n + 7) / 8) {
        throw DecodeError("payload size does not match the declared bit length");
    }
    if (n % 8 != 0 && (payload.back() & (0xFFU >> (n % 8))) != 0) {
        throw DecodeError("nonzero padding bits");
    }
    return {static_cast<CodeKind>(bytes[0]),
            BitString::from_bytes(std::vector<std::uint8_t>(payload.begin(), payload.end()), n)};
}

}  // namespace alphahash
