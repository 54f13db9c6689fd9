// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <string_view>

#include "streamcode/bitvec.hpp"

namespace streamcode {

/// Counter-based PRNG (splitmix64). Word k of the stream is a pure
/// function of (seed, k), so identical (seed, algorithm) pairs produce
/// identical bit streams on every platform. Bits are taken from each
/// 64-bit word starting at the least significant position.
class SeededRandomSource {
public:
    explicit SeededRandomSource(std::uint64_t seed) : seed_(seed) {}

    static constexpr std::string_view algorithm() { return "splitmix64"; }
    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_word();
    bool next_bit();
    BitVector next_bits(std::size_t n);

    /// Uniform integer in [0, m), m >= 1, by rejection on whole words.
    std::uint64_t next_below(std::uint64_t m);

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit();

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    std::uint64_t buffer_ = 0;
    unsigned bits_available_ = 0;
};

/// Child streams (retry attempts, Monte Carlo trials) use seed ^ index.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) { return base ^ index; }

}  // namespace streamcode
