// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#include "streamcode/subsetcode.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "streamcode/errors.hpp"
#include "streamcode/rng.hpp"

namespace streamcode::subsetcode {

namespace {

// Vectors over F_2^n for n <= 24 are handled as packed integers in the
// construction loops; bit t of the integer is coordinate t.
BitVector from_point(std::uint32_t p, std::size_t n) { return BitVector::from_uint(p, n); }

// Lexicographic order on coordinate strings = numeric order on the
// bit-reversed integer.
std::uint32_t lex_key(std::uint32_t p, std::size_t n) {
    std::uint32_t key = 0;
    for (std::size_t t = 0; t < n; ++t) {
        if ((p >> t) & 1) key |= std::uint32_t{1} << (n - 1 - t);
    }
    return key;
}

std::vector<std::uint32_t> masks_up_to_weight(std::size_t n, std::size_t r) {
    std::vector<std::uint32_t> masks;
    for (std::uint32_t m = 0; m < (std::uint32_t{1} << n); ++m) {
        if (static_cast<std::size_t>(std::popcount(m)) <= r) masks.push_back(m);
    }
    return masks;
}

}  // namespace

void SubsetCodeParams::validate() const {
    if (K < 1 || T < 1) throw DomainError("subset code requires K >= 1 and T >= 1");
    // delta = 0 is the degenerate code whose distance demand is vacuous.
    if (!(delta >= 0.0 && delta <= 1.0)) throw DomainError("subset code requires 0 <= delta <= 1");
    if (BigInt(K) * BigInt(T) > (BigInt(1) << n)) {
        throw DomainError("subset code requires K*T <= 2^n");
    }
}

SubsetCode::SubsetCode(SubsetCodeParams params, std::vector<std::vector<BitVector>> subsets,
                       std::vector<BitVector> centers)
    : params_(params), subsets_(std::move(subsets)), centers_(std::move(centers)) {
    params_.validate();
    if (subsets_.size() != params_.K) throw DomainError("subset count must equal K");
    for (auto& subset : subsets_) {
        if (subset.size() < params_.T) throw DomainError("every subset must have at least T vectors");
        for (const auto& v : subset) {
            if (v.size() != params_.n) throw DomainError("subset vectors must have length n");
        }
        std::sort(subset.begin(), subset.end(), BitVector::lex_less);
        for (std::size_t t = 1; t < subset.size(); ++t) {
            if (subset[t] == subset[t - 1]) throw DomainError("subset vectors must be distinct");
        }
    }
}

BitVector SubsetCode::encode(std::size_t k_idx, std::size_t t_idx) const {
    if (k_idx >= params_.K || t_idx >= params_.T) {
        throw DomainError("encode index out of range");
    }
    return subsets_[k_idx][t_idx];
}

std::size_t SubsetCode::decode_robust(const BitVector& word) const {
    if (word.size() != params_.n) throw DomainError("decode_robust word must have length n");
    // Subsets are visited in index order and each is sorted, so on ties
    // the first hit is exactly the smallest subset index / lex-smallest
    // vector.
    std::size_t best_k = 0;
    std::size_t best_d = params_.n + 1;
    for (std::size_t k = 0; k < subsets_.size(); ++k) {
        for (const auto& v : subsets_[k]) {
            const std::size_t d = hamming_distance(word, v);
            if (d < best_d) {
                best_d = d;
                best_k = k;
            }
        }
    }
    return best_k;
}

std::pair<std::size_t, std::size_t> SubsetCode::decode_exact(const BitVector& word) const {
    if (word.size() != params_.n) throw DomainError("decode_exact word must have length n");
    for (std::size_t k = 0; k < subsets_.size(); ++k) {
        const auto& subset = subsets_[k];
        const auto it =
            std::lower_bound(subset.begin(), subset.end(), word, BitVector::lex_less);
        if (it != subset.end() && *it == word) {
            return {k, static_cast<std::size_t>(it - subset.begin())};
        }
    }
    throw NotACodewordError("word is not an encoding of any (k, t)");
}

std::string SubsetCode::serialize() const {
    std::ostringstream out;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", params_.delta);
    out << "subsetcode v1 K=" << params_.K << " T=" << params_.T << " delta=" << buf
        << " n=" << params_.n << "\n";
    for (std::size_t k = 0; k < subsets_.size(); ++k) {
        out << "set " << k << ":\n";
        for (const auto& v : subsets_[k]) out << v.to_hex() << "\n";
    }
    return out.str();
}

SubsetCode SubsetCode::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string header;
    if (!std::getline(in, header)) throw ParseError("empty subsetcode artifact");
    std::istringstream hs(header);
    std::string magic, version, field;
    hs >> magic >> version;
    if (magic != "subsetcode" || version != "v1") throw ParseError("bad subsetcode header");
    SubsetCodeParams params;
    while (hs >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw ParseError("malformed header field: " + field);
        const std::string key = field.substr(0, eq), value = field.substr(eq + 1);
        try {
            if (key == "K") {
                params.K = std::stoull(value);
            } else if (key == "T") {
                params.T = std::stoull(value);
            } else if (key == "delta") {
                params.delta = std::stod(value);
            } else if (key == "n") {
                params.n = std::stoull(value);
            } else {
                throw ParseError("unknown header field: " + key);
            }
        } catch (const std::invalid_argument&) {
            throw ParseError("malformed value in header field: " + field);
        } catch (const std::out_of_range&) {
            throw ParseError("out-of-range value in header field: " + field);
        }
    }
    std::vector<std::vector<BitVector>> subsets;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("set ", 0) == 0) {
            if (line.back() != ':') throw ParseError("malformed set header: " + line);
            std::size_t idx = 0;
            try {
                idx = std::stoull(line.substr(4, line.size() - 5));
            } catch (const std::exception&) {
                throw ParseError("malformed set index: " + line);
            }
            if (idx != subsets.size()) throw ParseError("set indices must be consecutive");
            subsets.emplace_back();
        } else {
            if (subsets.empty()) throw ParseError("vector outside any set");
            subsets.back().push_back(BitVector::from_hex(line, params.n));
        }
    }
    try {
        return SubsetCode(params, std::move(subsets));
    } catch (const DomainError& e) {
        throw ParseError(std::string("invalid subsetcode artifact: ") + e.what());
    }
}

SubsetCode trivial_two_set(std::size_t n, double delta) {
    if (n < 1 || n > 20) throw DomainError("trivial_two_set supports 1 <= n <= 20");
    if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("trivial_two_set requires 0 < delta <= 1");
    if (delta * static_cast<double>(n) < 1.0 - 1e-9) {
        throw DomainError("trivial_two_set requires delta*n >= 1");
    }
    const double lo_bound = (1.0 - delta) * static_cast<double>(n) / 2.0;
    const double hi_bound = (1.0 + delta) * static_cast<double>(n) / 2.0;
    // Strict thresholds wt < lo_bound and wt > hi_bound; when they leave
    // nothing (delta = 1) the extremes {0} and {1^n} remain.
    const std::int64_t lo = std::max<std::int64_t>(ceil_int(lo_bound) - 1, 0);
    const std::int64_t hi =
        std::min<std::int64_t>(floor_int(hi_bound) + 1, static_cast<std::int64_t>(n));
    if (hi - lo < ceil_int(delta * static_cast<double>(n))) {
        throw DomainError("trivial_two_set thresholds collapse at these parameters");
    }
    std::vector<BitVector> low, high;
    for (std::uint32_t p = 0; p < (std::uint32_t{1} << n); ++p) {
        const auto w = static_cast<std::int64_t>(std::popcount(p));
        if (w <= lo) low.push_back(from_point(p, n));
        if (w >= hi) high.push_back(from_point(p, n));
    }
    SubsetCodeParams params;
    params.K = 2;
    params.T = std::min(low.size(), high.size());
    params.delta = delta;
    params.n = n;
    BitVector ones(n);
    for (std::size_t t = 0; t < n; ++t) ones.set(t);
    std::vector<BitVector> centers = {BitVector(n), std::move(ones)};
    return SubsetCode(params, {std::move(low), std::move(high)}, std::move(centers));
}

SubsetCode greedy_construct(std::size_t n, std::size_t k, double delta, std::uint64_t seed,
                            std::size_t candidate_cap) {
    if (n < 1 || n > 24) throw DomainError("greedy_construct supports 1 <= n <= 24");
    if (k < 1 || k > n) throw DomainError("greedy_construct requires 1 <= k <= n");
    if (!(delta >= 0.0 && delta <= 1.0)) throw DomainError("greedy_construct requires delta in [0,1]");
    if (candidate_cap < 1) throw DomainError("greedy_construct requires candidate_cap >= 1");

    const BigInt budget = BigInt(1) << (n - k);
    // Largest radius whose ball still fits in 2^(n-k) points.
    std::size_t r = 0;
    while (r < n && ball_size(n, r + 1) <= budget) ++r;
    const std::int64_t delta_n = floor_int(delta * static_cast<double>(n));
    const std::int64_t inner_radius = static_cast<std::int64_t>(r) - delta_n;
    if (inner_radius < 0) {
        throw DomainError("greedy_construct: r - floor(delta*n) is negative at these parameters");
    }

    const auto inner_masks = masks_up_to_weight(n, static_cast<std::size_t>(inner_radius));
    const auto outer_masks = masks_up_to_weight(n, r);
    const BigInt half_ball = (ball_size(n, static_cast<std::size_t>(inner_radius)) + 1) / 2;
    const auto min_size = half_ball.convert_to<std::size_t>();

    const std::size_t num_subsets = std::size_t{1} << (k - 1);
    std::vector<std::uint64_t> remaining((std::size_t{1} << n) / 64 + 1, ~std::uint64_t{0});
    auto in_remaining = [&](std::uint32_t p) { return (remaining[p >> 6] >> (p & 63)) & 1; };
    auto clear_point = [&](std::uint32_t p) { remaining[p >> 6] &= ~(std::uint64_t{1} << (p & 63)); };

    SeededRandomSource rng(seed);
    std::vector<std::vector<BitVector>> subsets;
    std::vector<BitVector> centers;
    std::size_t min_subset_size = std::size_t{1} << n;

    auto inner_count = [&](std::uint32_t center) {
        std::size_t count = 0;
        for (const auto mask : inner_masks) {
            if (in_remaining(center ^ mask)) ++count;
        }
        return count;
    };

    for (std::size_t s = 0; s < num_subsets; ++s) {
        std::uint32_t center = 0;
        bool found = false;
        for (std::size_t attempt = 0; attempt < candidate_cap; ++attempt) {
            const auto candidate = static_cast<std::uint32_t>(rng.next_below(std::uint64_t{1} << n));
            if (inner_count(candidate) >= min_size) {
                center = candidate;
                found = true;
                break;
            }
        }
        if (!found && n <= 20) {
            // The expectation argument guarantees some center works; scan
            // for the first one in index order.
            for (std::uint64_t candidate = 0; candidate < (std::uint64_t{1} << n); ++candidate) {
                if (inner_count(static_cast<std::uint32_t>(candidate)) >= min_size) {
                    center = static_cast<std::uint32_t>(candidate);
                    found = true;
                    break;
                }
            }
        }
        if (!found) {
            throw ConstructionFailedError(
                "greedy_construct: no acceptable center within candidate_cap at subset " +
                    std::to_string(s),
                candidate_cap);
        }

        std::vector<std::uint32_t> members;
        for (const auto mask : inner_masks) {
            const std::uint32_t p = center ^ mask;
            if (in_remaining(p)) members.push_back(p);
        }
        std::uint64_t removed = 0;
        for (const auto mask : outer_masks) {
            const std::uint32_t p = center ^ mask;
            if (in_remaining(p)) {
                clear_point(p);
                ++removed;
            }
        }
        // Progress bound from the construction proof: each step removes at
        // most |B(r)| <= 2^(n-k) points, so P stays above 2^(n-1).
        if (BigInt(removed) > budget) {
            throw Error("greedy_construct: removed more than 2^(n-k) points in one step");
        }

        std::sort(members.begin(), members.end(),
                  [n](std::uint32_t a, std::uint32_t b) { return lex_key(a, n) < lex_key(b, n); });
        std::vector<BitVector> subset;
        subset.reserve(members.size());
        for (const auto p : members) subset.push_back(from_point(p, n));
        min_subset_size = std::min(min_subset_size, subset.size());
        subsets.push_back(std::move(subset));
        centers.push_back(from_point(center, n));
    }

    SubsetCodeParams params;
    params.K = num_subsets;
    params.T = min_subset_size;
    params.delta = delta;
    params.n = n;
    return SubsetCode(params, std::move(subsets), std::move(centers));
}

VerificationReport verify_subset_distance(const SubsetCode& code, std::uint64_t work_cap) {
    const auto& params = code.params();
    const auto& subsets = code.subsets();
    VerificationReport report;

    std::uint64_t total_points = 0;
    for (const auto& subset : subsets) total_points += subset.size();
    if (total_points > (std::uint64_t{1} << 20)) {
        throw ScaleExceededError("verify_subset_distance: more than 2^20 points");
    }

    const double delta_n = params.delta * static_cast<double>(params.n);
    const auto required =
        static_cast<std::size_t>(std::max<std::int64_t>(0, ceil_int(delta_n)));
    // Strict ">" and non-strict ">=" readings of the distance demand only
    // diverge when delta*n lands exactly on an integer; surface that.
    if (std::abs(delta_n - std::round(delta_n)) < 1e-9 && required > 0) {
        report.note = "delta*n = " + std::to_string(required) +
                      " is an exact integer; distances are checked as >= that value";
    }

    // Disjointness across subsets (within-subset distinctness is a
    // construction invariant).
    std::map<std::string, std::size_t> owner;
    for (std::size_t a = 0; a < subsets.size(); ++a) {
        if (subsets[a].size() < params.T) {
            report.passed = false;
            Counterexample ce;
            ce.i = a;
            ce.j = a;
            ce.note = "subset " + std::to_string(a) + " smaller than T";
            report.counterexample = ce;
            return report;
        }
        for (const auto& v : subsets[a]) {
            auto [it, inserted] = owner.try_emplace(v.to_hex(), a);
            if (!inserted) {
                report.passed = false;
                Counterexample ce;
                ce.i = it->second;
                ce.j = a;
                ce.difference = v;
                ce.second = v;
                ce.note = "subsets are not disjoint";
                report.counterexample = ce;
                return report;
            }
        }
    }

    std::uint64_t work = 0;
    for (std::size_t a = 0; a < subsets.size(); ++a) {
        for (std::size_t b = a + 1; b < subsets.size(); ++b) {
            for (const auto& x : subsets[a]) {
                for (const auto& y : subsets[b]) {
                    if (++work > work_cap) {
                        throw ScaleExceededError("verify_subset_distance work cap exceeded");
                    }
                    const std::size_t d = hamming_distance(x, y);
                    if (d < required) {
                        report.passed = false;
                        Counterexample ce;
                        ce.i = a;
                        ce.j = b;
                        ce.difference = x;
                        ce.second = y;
                        ce.achieved_distance = d;
                        ce.required_distance = static_cast<double>(required);
                        ce.note = "cross-subset distance below ceil(delta*n)";
                        report.counterexample = ce;
                        return report;
                    }
                }
            }
        }
    }
    return report;
}

BigInt harper_impossibility_T(std::size_t n, std::size_t k, double delta) {
    if (k > n) throw DomainError("harper_impossibility_T requires k <= n");
    if (!(delta >= 0.0 && delta <= 1.0)) throw DomainError("delta must be in [0,1]");
    const BigInt target = BigInt(1) << (n - k);
    std::size_t r = 0;
    while (r <= n && ball_size(n, r) < target) ++r;
    const std::int64_t radius =
        ceil_int(static_cast<double>(r) - delta * static_cast<double>(n) / 2.0) + 2;
    if (radius < 0) return 1;
    return ball_size(n, static_cast<std::size_t>(radius));
}

double linear_subset_bound_exponent(double alpha, double delta) {
    if (!(delta > 0.0 && delta < alpha && alpha < 1.0)) {
        throw DomainError("linear_subset_bound_exponent requires 0 < delta < alpha < 1");
    }
    return alpha - delta / 2.0 * std::log2(alpha / (delta / 2.0));
}

double impossibility_exponent(double alpha, double delta) {
    if (!(alpha > 0.0 && alpha < 1.0 && delta > 0.0)) {
        throw DomainError("impossibility_exponent requires alpha in (0,1), delta > 0");
    }
    const double x = binary_entropy_inverse(alpha) - delta / 2.0;
    return x <= 0.0 ? 0.0 : binary_entropy(x);
}

double greedy_exponent(double alpha, double delta) {
    if (!(alpha > 0.0 && alpha < 1.0 && delta > 0.0)) {
        throw DomainError("greedy_exponent requires alpha in (0,1), delta > 0");
    }
    const double x = binary_entropy_inverse(alpha) - delta;
    return x <= 0.0 ? 0.0 : binary_entropy(x);
}

bool greedy_regime_ok(double alpha, double delta) {
    if (!(alpha > 0.0 && alpha < 1.0 && delta > 0.0)) return false;
    return delta <= alpha / (10.0 * std::log2(1.0 / alpha));
}

}  // namespace streamcode::subsetcode
