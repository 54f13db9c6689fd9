// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "streamcode/bitvec.hpp"
#include "streamcode/numeric.hpp"
#include "streamcode/report.hpp"

namespace streamcode::subsetcode {

struct SubsetCodeParams {
    std::size_t K = 0;  // number of subsets
    std::size_t T = 0;  // minimum subset size
    double delta = 0.0;
    std::size_t n = 0;  // ambient dimension

    void validate() const;
};

/// A family {S_1,...,S_K} of pairwise-disjoint subsets of F_2^n with
/// cross-subset Hamming distance >= ceil(delta*n). Subsets are stored
/// sorted lexicographically; encode(k, t) is the t-th vector of S_k under
/// that order, making the [K]x[T] -> F_2^n map injective.
class SubsetCode {
public:
    SubsetCode(SubsetCodeParams params, std::vector<std::vector<BitVector>> subsets,
               std::vector<BitVector> centers = {});

    const SubsetCodeParams& params() const { return params_; }
    const std::vector<std::vector<BitVector>>& subsets() const { return subsets_; }
    /// Construction metadata (greedy ball centers); not serialized.
    const std::vector<BitVector>& centers() const { return centers_; }

    BitVector encode(std::size_t k_idx, std::size_t t_idx) const;

    /// Index of the subset containing the vector nearest to `word`.
    /// Ties break to the smallest subset index, then the lexicographically
    /// smallest vector. Guaranteed correct up to floor((ceil(delta*n)-1)/2)
    /// errors.
    std::size_t decode_robust(const BitVector& word) const;

    /// Inverts the encoding exactly; throws NotACodewordError when the
    /// word is in no subset.
    std::pair<std::size_t, std::size_t> decode_exact(const BitVector& word) const;

    std::string serialize() const;
    static SubsetCode parse(std::string_view text);

private:
    SubsetCodeParams params_;
    std::vector<std::vector<BitVector>> subsets_;
    std::vector<BitVector> centers_;
};

/// The two-subset code {wt < (1-delta)n/2} and {wt > (1+delta)n/2}; at
/// delta = 1 this degenerates to {0} and {1^n}.
SubsetCode trivial_two_set(std::size_t n, double delta);

/// Greedy ball construction: repeatedly pick a center whose radius
/// (r - floor(delta*n)) ball still meets at least half its volume inside
/// the unclaimed point set, claim that intersection as a subset, and
/// remove the radius-r ball. r is the largest radius with
/// |B(r)| <= 2^(n-k); produces K = 2^(k-1) subsets.
///
/// Centers are sampled from the seeded source, at most candidate_cap
/// tries per subset; when the cap is exhausted and n <= 20 a full scan
/// over F_2^n is used as fallback.
SubsetCode greedy_construct(std::size_t n, std::size_t k, double delta, std::uint64_t seed,
                            std::size_t candidate_cap = 1024);

/// Exhaustive check of disjointness, sizes >= T, and pairwise
/// cross-subset distance >= ceil(delta*n).
VerificationReport verify_subset_distance(const SubsetCode& code,
                                          std::uint64_t work_cap = kDefaultWorkCap);

/// Isoperimetric impossibility bound: any (2^k, T, delta, n)-subset code
/// has T < ball_size(n, ceil(r - delta*n/2) + 2) where r is the minimal
/// radius with |B(r)| >= 2^(n-k). Returns 1 when the radius degenerates.
BigInt harper_impossibility_T(std::size_t n, std::size_t k, double delta);

/// Per-n log2 of the maximal linear subset size:
/// alpha - (delta/2) * log2(alpha/(delta/2)). Leading order only, with
/// the constant fixed by the explicit counting argument.
double linear_subset_bound_exponent(double alpha, double delta);

/// Leading-order per-n log2 bounds on T for general subset codes with
/// K = 2^((1-alpha)n): no code beats H(Hinv(alpha) - delta/2), and the
/// greedy construction achieves H(Hinv(alpha) - delta). Diagnostics, not
/// guarantees.
double impossibility_exponent(double alpha, double delta);
double greedy_exponent(double alpha, double delta);

/// The greedy regime needs delta small against alpha; this implements the
/// working cutoff delta <= alpha / (10*log2(1/alpha)).
bool greedy_regime_ok(double alpha, double delta);

}  // namespace streamcode::subsetcode
