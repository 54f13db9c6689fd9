// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "streamcode/bitvec.hpp"
#include "streamcode/report.hpp"
#include "streamcode/rng.hpp"

namespace streamcode::lincode {

/// Parameters of a prefix-supported random linear code. Codeword bit i
/// (1-based) is a random linear functional of the first ceil(tau*i)
/// message bits. For the random-error variant, tau plays the role of the
/// introduction rate r0.
struct LinearCodePlan {
    double epsilon = 0.0;
    double rate = 0.0;  // R
    double tau = 0.0;
    std::size_t k0 = 1;       // minimum prefix length the guarantee starts at
    std::size_t horizon = 0;  // codeword length materialized
    std::uint64_t seed = 0;

    void validate() const;
    // ceil(tau * i) for 1-based codeword index i.
    std::size_t row_length(std::size_t i) const;
    std::size_t message_bits() const { return row_length(horizon); }
};

/// Materialized coefficient rows a_{.,i} for i = 1..horizon. Row i has
/// length ceil(tau*i), i.e. support only on the message prefix introduced
/// so far. Immutable after construction.
class GeneratorSchedule {
public:
    GeneratorSchedule(LinearCodePlan plan, std::vector<BitVector> rows);

    const LinearCodePlan& plan() const { return plan_; }
    std::size_t horizon() const { return rows_.size(); }
    /// Coefficient row for codeword index i (1-based).
    const BitVector& row(std::size_t i) const { return rows_[i - 1]; }
    const std::vector<BitVector>& rows() const { return rows_; }

    /// C(x)[:j]. Shorter messages are implicitly zero-padded.
    BitVector encode_prefix(const BitVector& message, std::size_t j) const;
    /// Single codeword bit C(x)[i], 1-based.
    bool encode_bit(const BitVector& message, std::size_t i) const;

    GeneratorSchedule truncated(std::size_t new_horizon) const;

    std::string serialize() const;
    static GeneratorSchedule parse(std::string_view text);

private:
    LinearCodePlan plan_;
    std::vector<BitVector> rows_;
};

/// 1 - tau - H(eps / (1 - R/tau)); positive iff the random construction
/// succeeds with positive probability.
double feasibility_margin(double epsilon, double rate, double tau);

/// The (R, tau) pair used in the existence proof:
/// R = 1 - 4*sqrt(eps*log2(1/eps)), tau = R / (1 - sqrt(eps*log2(1/eps))).
std::pair<double, double> default_tau(double epsilon);

/// Leading term of the log2 probability bound on the bad event B_{i,j}:
/// (tau + H(eps/(1-R/tau)) - 1) * (1 - R/tau) * j. The o(j) term is
/// excluded; diagnostic only.
double bij_log_prob_bound(std::size_t i, std::size_t j, double epsilon, double rate, double tau);

/// Samples every coefficient bit i.i.d. from the plan's seeded source.
GeneratorSchedule sample_generator(const LinearCodePlan& plan);

/// Exhaustive check of the unbounded-distance property: for every first
/// difference position i in [k0, R*horizon] and every j in [ceil(i/R),
/// horizon], all difference vectors of length ceil(tau*j) with first
/// nonzero at i must have prefix weight >= max(1, ceil(eps*j)).
///
/// The enumeration walks difference vectors grouped by first nonzero
/// position and prunes branches whose accumulated prefix weight already
/// meets every remaining threshold; `work_cap` bounds the number of
/// vector-extension steps actually performed.
VerificationReport verify_unbounded_distance(const GeneratorSchedule& schedule,
                                             std::uint64_t work_cap = kDefaultWorkCap);

/// Random-error variant (tau plays r0): for every j in [k0, horizon] and
/// first difference position k <= R*j, prefix weight must be
/// >= max(1, ceil(3*eps*(j - k/r0))).
VerificationReport verify_random_error_distance(const GeneratorSchedule& schedule,
                                                std::uint64_t work_cap = kDefaultWorkCap);

/// Exact minimum codeword-prefix weight at length j over all difference
/// vectors whose first nonzero position is at most max_first. Saturates
/// at probe_cap (a return of probe_cap means "at least probe_cap").
/// This is the distance that decides unique decoding of the first
/// max_first message bits from C[:j].
std::size_t min_prefix_distance(const GeneratorSchedule& schedule, std::size_t j,
                                std::size_t max_first, std::size_t probe_cap = 8,
                                std::uint64_t work_cap = kDefaultWorkCap);

struct ConstructionResult {
    GeneratorSchedule schedule;
    std::size_t attempts = 0;
};

/// Rejection-samples schedules until verify_unbounded_distance passes.
/// Attempt a (1-based) draws from seed ^ (a-1), so the passing attempt is
/// reproducible from the base seed alone.
ConstructionResult construct_with_retries(const LinearCodePlan& plan, std::size_t max_attempts,
                                          std::uint64_t work_cap = kDefaultWorkCap);

}  // namespace streamcode::lincode
