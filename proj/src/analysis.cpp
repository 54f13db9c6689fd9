// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#include "streamcode/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "streamcode/errors.hpp"
#include "streamcode/numeric.hpp"

namespace streamcode::analysis {

std::size_t RankProfile::inverse(std::size_t t) const {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] >= t) return i;
    }
    return values.size();  // horizon() + 1
}

RankProfile rank_profile(std::span<const BitVector> rows) {
    std::size_t width = 0;
    for (const auto& r : rows) width = std::max(width, r.size());
    GF2Basis basis;
    RankProfile profile;
    profile.values.reserve(rows.size() + 1);
    profile.values.push_back(0);
    for (const auto& r : rows) {
        BitVector padded(width);
        for (std::size_t t = 0; t < r.size(); ++t) padded.set(t, r.get(t));
        basis.insert(std::move(padded));
        profile.values.push_back(basis.rank());
    }
    return profile;
}

RankProfile rank_profile(const lincode::GeneratorSchedule& schedule, std::size_t n) {
    if (n > schedule.horizon()) throw DomainError("rank_profile: n exceeds the horizon");
    return rank_profile(std::span(schedule.rows().data(), n));
}

RedundancyProfile redundancy_profile(const RankProfile& ranks) {
    RedundancyProfile r;
    r.values.reserve(ranks.values.size());
    for (std::size_t i = 0; i < ranks.values.size(); ++i) {
        if (ranks.values[i] > i) throw DomainError("rank profile exceeds prefix length");
        r.values.push_back(i - ranks.values[i]);
    }
    return r;
}

VerificationReport check_redundancy_upper(const RedundancyProfile& profile, double rate,
                                          std::size_t k0) {
    VerificationReport report;
    for (std::size_t i = k0; i <= profile.horizon(); ++i) {
        const double bound = (1.0 - rate) * static_cast<double>(i) + 1.0;
        if (static_cast<double>(profile.values[i]) > bound + 1e-9) {
            report.passed = false;
            Counterexample ce;
            ce.i = i;
            ce.j = i;
            ce.achieved_distance = profile.values[i];
            ce.required_distance = bound;
            ce.note = "redundancy exceeds (1-R)i + 1";
            report.counterexample = ce;
            return report;
        }
    }
    return report;
}

VerificationReport check_linearsub(const RankProfile& profile, double epsilon, double rate,
                                   std::size_t k0) {
    VerificationReport report;
    const std::size_t n = profile.horizon();
    const RedundancyProfile r = redundancy_profile(profile);
    for (std::size_t i = k0; i <= n; ++i) {
        const std::size_t hinv = profile.inverse(i);
        const auto j_begin = static_cast<std::size_t>(
            std::max<std::int64_t>(1, ceil_int(static_cast<double>(i) / rate)));
        if (hinv > n) {
            // H never reaches i inside the horizon; the pair is untestable.
            if (j_begin <= n) report.skipped_pairs += n - j_begin + 1;
            continue;
        }
        for (std::size_t j = j_begin; j <= n; ++j) {
            const double lhs =
                static_cast<double>(r.values[j]) - static_cast<double>(r.values[hinv]);
            const double rhs = epsilon * static_cast<double>(j) - 1.0;
            if (lhs < rhs - 1e-9) {
                report.passed = false;
                Counterexample ce;
                ce.i = i;
                ce.j = j;
                ce.achieved_distance = static_cast<std::size_t>(std::max(0.0, lhs));
                ce.required_distance = rhs;
                ce.note = "r(j) - r(H^-1(i)) fell below eps*j - 1";
                report.counterexample = ce;
                return report;
            }
        }
    }
    return report;
}

std::vector<double> prefix_entropy_profile(
    const std::function<BitVector(const BitVector&)>& encoder, std::size_t message_bits,
    std::size_t n, std::uint64_t work_cap) {
    if (message_bits > 16) throw ScaleExceededError("prefix_entropy_profile supports <= 16 bits");
    const std::uint64_t count = std::uint64_t{1} << message_bits;
    if (count * (n + 1) / 16 > work_cap) {
        throw ScaleExceededError("prefix_entropy_profile exceeds the work cap");
    }

    std::vector<BitVector> codewords;
    codewords.reserve(count);
    for (std::uint64_t c = 0; c < count; ++c) {
        BitVector msg(message_bits);
        for (std::size_t t = 0; t < message_bits; ++t) {
            if ((c >> (message_bits - 1 - t)) & 1) msg.set(t);
        }
        BitVector cw = encoder(msg);
        if (cw.size() < n) throw DomainError("encoder output shorter than n");
        codewords.push_back(std::move(cw));
    }

    // Partition refinement: group[c] identifies the prefix class of
    // message c after i bits; refining by bit i+1 splits groups. Entropy
    // from exact dyadic counts: H = m - (1/2^m) * sum c_g * log2(c_g).
    std::vector<std::uint32_t> group(count, 0);
    std::size_t group_count = 1;
    std::vector<double> profile;
    profile.reserve(n + 1);
    profile.push_back(0.0);

    std::vector<std::uint32_t> zero_child(count), one_child(count);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(zero_child.begin(), zero_child.begin() + group_count, 0xffffffffu);
        std::fill(one_child.begin(), one_child.begin() + group_count, 0xffffffffu);
        std::size_t next_count = 0;
        for (std::uint64_t c = 0; c < count; ++c) {
            auto& slot = codewords[c].get(i) ? one_child[group[c]] : zero_child[group[c]];
            if (slot == 0xffffffffu) slot = static_cast<std::uint32_t>(next_count++);
            group[c] = slot;
        }
        group_count = next_count;
        std::vector<std::uint64_t> sizes(group_count, 0);
        for (std::uint64_t c = 0; c < count; ++c) ++sizes[group[c]];
        double acc = 0.0;
        for (const auto s : sizes) {
            acc += static_cast<double>(s) * std::log2(static_cast<double>(s));
        }
        profile.push_back(static_cast<double>(message_bits) -
                          acc / static_cast<double>(count));
    }
    return profile;
}

VerificationReport check_entropy_r_upper(std::span<const double> entropy, double rate,
                                         std::size_t k0) {
    VerificationReport report;
    for (std::size_t i = k0; i < entropy.size(); ++i) {
        const double redundancy = static_cast<double>(i) - entropy[i];
        const double bound = (1.0 - rate) * static_cast<double>(i) + 1.0;
        if (redundancy > bound + 1e-9) {
            report.passed = false;
            Counterexample ce;
            ce.i = i;
            ce.j = i;
            ce.achieved_distance = static_cast<std::size_t>(std::lround(redundancy));
            ce.required_distance = bound;
            ce.note = "entropy redundancy exceeds (1-R)i + 1";
            report.counterexample = ce;
            return report;
        }
    }
    return report;
}

}  // namespace streamcode::analysis
