// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "streamcode/bitvec.hpp"
#include "streamcode/lincode.hpp"
#include "streamcode/report.hpp"

namespace streamcode::analysis {

/// H(i) = rank of the first i coefficient rows, i = 0..n.
struct RankProfile {
    std::vector<std::size_t> values;

    std::size_t horizon() const { return values.size() - 1; }
    /// Minimal i with H(i) >= t; horizon()+1 as out-of-horizon sentinel.
    std::size_t inverse(std::size_t t) const;
};

/// r(i) = i - H(i).
struct RedundancyProfile {
    std::vector<std::size_t> values;

    std::size_t horizon() const { return values.size() - 1; }
};

RankProfile rank_profile(std::span<const BitVector> rows);
RankProfile rank_profile(const lincode::GeneratorSchedule& schedule, std::size_t n);
RedundancyProfile redundancy_profile(const RankProfile& ranks);

/// r(i) <= (1-R)i + 1 for i in [k0, n].
VerificationReport check_redundancy_upper(const RedundancyProfile& profile, double rate,
                                          std::size_t k0);

/// r(j) - r(H^-1(i)) >= eps*j - 1 for i >= k0, j >= ceil(i/R); pairs whose
/// H^-1(i) lies outside the horizon are counted in skipped_pairs.
VerificationReport check_linearsub(const RankProfile& profile, double epsilon, double rate,
                                   std::size_t k0);

/// Exact Shannon entropy (bits) of C(x)[:i] under a uniform message, for
/// i = 0..n. Enumerates all 2^message_bits messages; probabilities are
/// exact dyadic counts, so for linear encoders the result equals the rank
/// profile exactly.
std::vector<double> prefix_entropy_profile(
    const std::function<BitVector(const BitVector&)>& encoder, std::size_t message_bits,
    std::size_t n, std::uint64_t work_cap = kDefaultWorkCap);

/// i - H(i) <= (1-R)i + 1 for i in [k0, n], from an entropy profile.
VerificationReport check_entropy_r_upper(std::span<const double> entropy, double rate,
                                         std::size_t k0);

}  // namespace streamcode::analysis
