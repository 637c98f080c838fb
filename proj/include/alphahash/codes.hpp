#pragma once

// Prefix-free codes for positive integers and the bit-level container used to
// store a hash-function description.
//
// Bits are packed most-significant-bit first; the last byte is zero padded and
// the true bit length travels alongside the payload.

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace alphahash {

class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BitString {
public:
    BitString() = default;

    /// Builds from a string of '0'/'1' characters.
    static BitString from_string(std::string_view bits);
    static BitString from_bytes(std::vector<std::uint8_t> bytes, std::size_t bit_length);

    void push_back(bool bit);
    /// Appends the low `count` bits of `value`, most significant first.
    void append_bits(std::uint64_t value, unsigned count);
    void append(const BitString& other);

    bool operator[](std::size_t i) const { return (bytes_[i >> 3] >> (7 - (i & 7))) & 1U; }
    std::size_t size() const { return bit_length_; }
    bool empty() const { return bit_length_ == 0; }
    std::span<const std::uint8_t> bytes() const { return bytes_; }

    bool is_prefix_of(const BitString& other) const;
    std::string to_string() const;

    friend bool operator==(const BitString&, const BitString&) = default;

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t bit_length_ = 0;
};

/// Sequential reader over a BitString; throws DecodeError on underrun.
class BitReader {
public:
    explicit BitReader(const BitString& bits, std::size_t start = 0) : bits_(&bits), pos_(start) {}

    bool read_bit();
    std::uint64_t read_bits(unsigned count);
    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return bits_->size() - pos_; }

private:
    const BitString* bits_;
    std::size_t pos_;
};

enum class CodeKind : std::uint8_t {
    elias_gamma = 0,
    elias_delta = 1,
    golomb = 2,
    empirical_shannon = 3,
};

std::string to_string(CodeKind kind);

/// Canonical prefix code built from observed frequencies, with one escape
/// codeword followed by an Elias delta codeword for values never observed.
struct EmpiricalTable {
    struct Entry {
        std::uint64_t codeword = 0;
        unsigned length = 0;
    };
    std::map<std::uint64_t, Entry> entries;  // observed value -> codeword
    Entry escape;
    // Canonical decoding tables indexed by codeword length.
    std::vector<std::uint64_t> first_code;
    std::vector<std::uint32_t> first_index;
    std::vector<std::uint32_t> count;
    std::vector<std::uint64_t> symbols;  // canonical order; 0 marks the escape
};

class IntegerCode {
public:
    static IntegerCode elias_gamma() { return IntegerCode(CodeKind::elias_gamma); }
    static IntegerCode elias_delta() { return IntegerCode(CodeKind::elias_delta); }
    static IntegerCode golomb(std::uint64_t m);
    static IntegerCode empirical(std::shared_ptr<const EmpiricalTable> table);

    CodeKind kind() const { return kind_; }
    std::uint64_t golomb_m() const { return golomb_m_; }
    const EmpiricalTable* table() const { return table_.get(); }

private:
    explicit IntegerCode(CodeKind kind) : kind_(kind) {}

    CodeKind kind_;
    std::uint64_t golomb_m_ = 1;
    std::shared_ptr<const EmpiricalTable> table_;
};

struct DecodedInt {
    std::uint64_t value = 0;
    std::size_t consumed = 0;
};

/// Appends the codeword for t (t >= 1) to `out`.
void encode_int(const IntegerCode& code, std::uint64_t t, BitString& out);
BitString encode_int(const IntegerCode& code, std::uint64_t t);

/// Reads one codeword from `reader`.
std::uint64_t decode_int(const IntegerCode& code, BitReader& reader);
/// Decodes the codeword at the start of `bits`.
DecodedInt decode_int(const IntegerCode& code, const BitString& bits);

/// Codeword length without materializing it.
std::size_t codeword_length(const IntegerCode& code, std::uint64_t t);

/// Golomb parameter for a geometric source on {1, 2, ...} with the given
/// success probability. Uses the Gallager/Van Voorhis rule
/// m = ceil(log(2 - p) / -log(1 - p)), which minimizes the expected codeword
/// length for every p in (0, 1).
std::uint64_t golomb_parameter_for_geometric(double success_prob);

/// Shannon-style code from samples: each observed value v gets length
/// ceil(log2((N + 1) / c_v)) and the escape gets ceil(log2(N + 1)), where
/// c_v is the count of v among N samples.
IntegerCode build_empirical_code(std::span<const std::uint64_t> samples);

/// On-wire hash function description: one code-kind byte, the bit length as a
/// 4-byte big-endian integer, then the MSB-first payload.
std::vector<std::uint8_t> serialize_description(CodeKind kind, const BitString& bits);

struct ParsedDescription {
    CodeKind kind;
    BitString bits;
};

ParsedDescription parse_description(std::span<const std::uint8_t> bytes);

}  // namespace alphahash
