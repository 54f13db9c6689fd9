// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "streamcode/bitvec.hpp"
#include "streamcode/lincode.hpp"
#include "streamcode/report.hpp"

namespace streamcode::channels {

struct ErrorPattern {
    std::size_t length = 0;
    BitVector flips;  // flips.size() == length

    std::size_t weight() const { return flips.weight(); }
    std::string serialize() const;
    static ErrorPattern parse(std::string_view text);
};

struct ChannelSpec {
    enum class Kind { bsc, adversarial_budget, per_packet };
    Kind kind = Kind::bsc;
    double epsilon = 0.0;
    std::size_t packet_len = 0;  // per_packet only
    std::size_t overshoot = 0;   // per_packet only
    std::uint64_t seed = 0;      // stochastic kinds only

    void validate() const;
};

/// bsc: i.i.d. Bernoulli(eps) flips from the seeded source.
/// per_packet: floor(eps*packet_len) + overshoot flips at the start of
/// every complete packet (spec-invalid if that exceeds packet_len).
/// adversarial_budget requires caller positions; use the overload below.
ErrorPattern sample_pattern(const ChannelSpec& spec, std::size_t j);

/// adversarial_budget: validates that the caller-supplied flip positions
/// fit the budget floor(eps*j); it does not search for patterns.
ErrorPattern sample_pattern(const ChannelSpec& spec, std::size_t j,
                            std::span<const std::size_t> positions);

struct DecodeOutcome {
    BitVector recovered_prefix;
    std::size_t target_length = 0;
    bool success = false;
    std::uint64_t candidates_scanned = 0;
};

/// Nearest-codeword decoding by branch-and-bound over the message tree:
/// message bits are fixed one at a time, each level scores the codeword
/// bits that become fully determined, and branches whose partial distance
/// already exceeds the best candidate are cut. The result equals the
/// argmin over all 2^ceil(tau*j) message prefixes with ties broken to the
/// lexicographically smallest message. `work_cap` bounds tree nodes.
///
/// When `truth` is given, success compares the recovered prefix to it;
/// otherwise success just records completion.
DecodeOutcome decode_nearest(const lincode::GeneratorSchedule& schedule, const BitVector& received,
                             std::size_t target_i, const BitVector* truth = nullptr,
                             std::uint64_t work_cap = kDefaultWorkCap);

/// Brute-force nearest codeword for an arbitrary deterministic encoder
/// (layered codes included): scans all 2^message_bits messages in
/// lexicographic order, compares encodings against the first
/// received.size() codeword bits, and keeps the first argmin.
DecodeOutcome decode_nearest_exhaustive(
    const std::function<BitVector(const BitVector&)>& encoder, std::size_t message_bits,
    const BitVector& received, std::size_t target_i, const BitVector* truth = nullptr,
    std::uint64_t work_cap = kDefaultWorkCap);

/// Fixed-length packets, each encoded with a freshly sampled systematic
/// code of verified distance ceil(delta*packet_code_bits) and decoded by
/// exhaustive nearest codeword. Returns the number of leading message
/// bits recovered before the first failed packet.
std::size_t packetized_baseline(std::size_t packet_message_bits, std::size_t packet_code_bits,
                                double delta, const BitVector& stream, const ErrorPattern& pattern,
                                std::uint64_t seed, std::size_t max_attempts = 200);

struct TrialRecord {
    std::size_t trial = 0;
    std::size_t j = 0;
    std::size_t target_i = 0;
    std::size_t flips = 0;
    bool ok = false;
};

struct MonteCarloResult {
    double failure_rate = 0.0;
    double ci95_half_width = 0.0;
    std::size_t trials = 0;
    std::vector<TrialRecord> records;
};

/// Independent (message, noise) draws through BSC(eps) followed by
/// decode_nearest; trial t uses seed ^ t, so trials are reproducible and
/// order-independent.
MonteCarloResult monte_carlo_bsc(const lincode::GeneratorSchedule& schedule, double epsilon,
                                 std::size_t j, std::size_t target_i, std::size_t trials,
                                 std::uint64_t seed, std::uint64_t work_cap = kDefaultWorkCap);

}  // namespace streamcode::channels
