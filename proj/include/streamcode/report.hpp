// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "streamcode/bitvec.hpp"

namespace streamcode {

/// Witness for a failed verification. For linear codes `difference` is
/// the violating message difference vector with first nonzero index
/// `i` (1-based) and prefix length `j`; for subset/layered codes the
/// two witnesses are the offending pair and i/j identify them (see the
/// note text for the exact meaning in context).
struct Counterexample {
    std::size_t i = 0;
    std::size_t j = 0;
    BitVector difference;
    BitVector second;
    std::size_t achieved_distance = 0;
    double required_distance = 0.0;
    std::string note;
};

struct VerificationReport {
    bool passed = true;
    std::optional<Counterexample> counterexample;
    // Pairs the checker had to skip (e.g. rank never reaches the index
    // inside the horizon); informational.
    std::size_t skipped_pairs = 0;
    // Caveats that do not affect the verdict, e.g. boundary conventions
    // that only matter at exact-integer thresholds.
    std::string note;

    std::string describe() const;
};

constexpr std::uint64_t kDefaultWorkCap = std::uint64_t{1} << 26;

}  // namespace streamcode
