// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "streamcode/bitvec.hpp"
#include "streamcode/report.hpp"
#include "streamcode/subsetcode.hpp"

namespace streamcode::layered {

/// Linear parity map P such that x -> (x || P*x) has verified minimum
/// distance >= ceil(delta * total_length) over all nonzero x. Only inputs
/// of weight below the required distance can violate that bound, so
/// verification enumerates exactly those.
struct SystematicChecksum {
    std::size_t input_length = 0;
    BitMatrix parity;  // parity.rows() x input_length
    double delta = 0.0;
    std::size_t required_distance = 0;

    std::size_t parity_rows() const { return parity.rows(); }
    std::size_t total_length() const { return input_length + parity.rows(); }
    /// P*x for the first input_length bits of x.
    BitVector apply(const BitVector& x) const;
};

/// Parity row count from the fixed point p = ceil(H(delta) * (len + p)).
std::size_t checksum_parity_rows(std::size_t input_length, double delta);

/// Rejection-samples parity matrices with an explicit shape until the
/// concatenated code reaches `required_distance`. Attempt a draws from
/// seed ^ (a-1).
SystematicChecksum sample_systematic(std::size_t input_length, std::size_t parity_rows,
                                     std::size_t required_distance, double delta,
                                     std::uint64_t seed, std::size_t max_attempts,
                                     std::uint64_t work_cap = kDefaultWorkCap);

/// The checksum of the layered construction: parity rows sized by the
/// H(delta) fixed point, verified distance ceil(delta * total).
SystematicChecksum make_checksum(std::size_t input_length, double delta, std::uint64_t seed,
                                 std::size_t max_attempts = 100,
                                 std::uint64_t work_cap = kDefaultWorkCap);

std::string serialize_checksum(const SystematicChecksum& cs);
SystematicChecksum parse_checksum(std::string_view text);

/// Re-checks the distance invariant of an existing checksum by the same
/// weight-limited scan used at construction.
VerificationReport verify_checksum(const SystematicChecksum& cs,
                                   std::uint64_t work_cap = kDefaultWorkCap);

struct BasePayload {
    std::vector<BitVector> generator;  // one row per message bit, `length` wide
};

struct SubsetPayload {
    std::shared_ptr<const subsetcode::SubsetCode> code;
    std::string code_ref;  // serialized reference (file path) for artifacts
    std::size_t block_index = 0;      // 1-based position within its extension
    std::size_t block_offset = 0;     // message offset of B_j
    std::size_t block_bits = 0;       // |B_j| = s
    std::size_t sub_offset = 0;       // message offset of b_j
    std::size_t sub_bits = 0;         // |b_j| = s_sub
};

struct ChecksumPayload {
    SystematicChecksum checksum;
};

struct Segment {
    enum class Kind { base, subset_block, checksum };
    std::size_t start = 0;
    std::size_t length = 0;
    std::variant<BasePayload, SubsetPayload, ChecksumPayload> payload;

    Kind kind() const;
};

/// Parameters of one extension step: ell-1 blocks of block_bits message
/// bits, a final block of sub_bits*(ell-1) bits split across the subset
/// encodings, and a checksum over the whole codeword so far.
struct LayeredPlan {
    double epsilon = 0.0;
    std::size_t ell = 2;
    std::size_t block_bits = 0;  // s
    std::size_t sub_bits = 0;    // s_sub
    double checksum_delta = 0.0;  // 2*eps in the construction
    std::uint64_t seed = 0;
    std::shared_ptr<const subsetcode::SubsetCode> subset_code;
    std::string subset_code_ref;
    std::size_t checksum_max_attempts = 100;

    void validate() const;
    std::size_t message_growth() const { return (ell - 1) * (block_bits + sub_bits); }
};

class LayeredCode {
public:
    LayeredCode(double epsilon, std::vector<Segment> segments, std::size_t message_length,
                std::size_t codeword_length);

    double epsilon() const { return epsilon_; }
    const std::vector<Segment>& segments() const { return segments_; }
    std::size_t message_length() const { return message_length_; }
    std::size_t codeword_length() const { return codeword_length_; }

    /// Messages shorter than message_length are implicitly zero-padded.
    BitVector encode(const BitVector& message) const;

    /// Number of leading message bits guaranteed recoverable from any
    /// corruption of C[:j] within the epsilon budget: everything through
    /// the last recovery point (base end or checksum end), plus B_i for
    /// each subset block completed after it.
    std::size_t decodable_prefix_length(std::size_t j) const;

    std::string serialize() const;
    using SubsetLoader = std::function<std::shared_ptr<const subsetcode::SubsetCode>(
        const std::string& ref)>;
    static LayeredCode parse(std::string_view text, const SubsetLoader& loader);

private:
    double epsilon_;
    std::vector<Segment> segments_;
    std::size_t message_length_;
    std::size_t codeword_length_;
};

/// Base code: a random linear [ceil(k0/rate), k0] code with verified
/// minimum distance >= ceil(2*eps*length), wrapped as a one-segment
/// LayeredCode.
LayeredCode seed_code(std::size_t k0, double epsilon, double rate, std::uint64_t seed,
                      std::size_t max_attempts = 200);

/// Appends ell-1 subset-code segments (pairs (B_j, b_j)) and a checksum
/// over the entire new codeword.
LayeredCode extend(const LayeredCode& base, const LayeredPlan& plan);

/// Exhaustive pairwise check: messages differing within the first
/// decodable_prefix_length(j) bits must have codeword prefixes at
/// distance >= max(1, ceil(eps*j)); at j = codeword_length the full
/// message_length claim is checked.
VerificationReport verify_layered(const LayeredCode& code,
                                  std::uint64_t work_cap = kDefaultWorkCap);

}  // namespace streamcode::layered
