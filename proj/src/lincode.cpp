// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#include "streamcode/lincode.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <thread>

#include "streamcode/errors.hpp"
#include "streamcode/numeric.hpp"
#include "streamcode/util.hpp"

namespace streamcode::lincode {

void LinearCodePlan::validate() const {
    // eps = 0 degrades the distance demand to plain injectivity and is
    // allowed for diagnostic schedules; eps >= 1 is unsatisfiable.
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw DomainError("plan requires 0 <= eps < 1");
    if (!(rate > 0.0 && rate < tau && tau < 1.0)) throw DomainError("plan requires 0 < R < tau < 1");
    if (k0 < 1) throw DomainError("plan requires k0 >= 1");
    if (static_cast<double>(horizon) < static_cast<double>(k0) / rate - 1e-9) {
        throw DomainError("plan requires horizon >= k0/R");
    }
}

std::size_t LinearCodePlan::row_length(std::size_t i) const {
    return static_cast<std::size_t>(ceil_int(tau * static_cast<double>(i)));
}

GeneratorSchedule::GeneratorSchedule(LinearCodePlan plan, std::vector<BitVector> rows)
    : plan_(plan), rows_(std::move(rows)) {
    plan_.validate();
    if (rows_.size() != plan_.horizon) throw DomainError("schedule must have horizon rows");
    for (std::size_t i = 1; i <= rows_.size(); ++i) {
        if (rows_[i - 1].size() != plan_.row_length(i)) {
            throw DomainError("row " + std::to_string(i) + " must have length ceil(tau*i)");
        }
    }
}

BitVector GeneratorSchedule::encode_prefix(const BitVector& message, std::size_t j) const {
    if (j > horizon()) throw DomainError("encode_prefix: j exceeds the schedule horizon");
    BitVector out(j);
    for (std::size_t i = 1; i <= j; ++i) {
        if (gf2_dot(rows_[i - 1], message)) out.set(i - 1);
    }
    return out;
}

bool GeneratorSchedule::encode_bit(const BitVector& message, std::size_t i) const {
    if (i < 1 || i > horizon()) throw DomainError("encode_bit: index out of horizon");
    return gf2_dot(rows_[i - 1], message);
}

GeneratorSchedule GeneratorSchedule::truncated(std::size_t new_horizon) const {
    if (new_horizon > horizon()) throw DomainError("truncated: horizon can only shrink");
    LinearCodePlan p = plan_;
    p.horizon = new_horizon;
    return GeneratorSchedule(p, {rows_.begin(), rows_.begin() + new_horizon});
}

std::string GeneratorSchedule::serialize() const {
    std::ostringstream out;
    char buf[128];
    out << "lincode v1";
    std::snprintf(buf, sizeof buf, " eps=%.17g R=%.17g tau=%.17g", plan_.epsilon, plan_.rate,
                  plan_.tau);
    out << buf << " k0=" << plan_.k0 << " n=" << plan_.horizon << " seed=" << plan_.seed << "\n";
    for (const auto& row : rows_) out << row.to_hex() << "\n";
    return out.str();
}

GeneratorSchedule GeneratorSchedule::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string header;
    if (!std::getline(in, header)) throw ParseError("empty lincode artifact");
    std::istringstream hs(header);
    std::string magic, version;
    hs >> magic >> version;
    if (magic != "lincode" || version != "v1") throw ParseError("bad lincode header");
    LinearCodePlan plan;
    std::string field;
    bool have_eps = false, have_r = false, have_tau = false, have_k0 = false, have_n = false,
         have_seed = false;
    while (hs >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw ParseError("malformed header field: " + field);
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        try {
            if (key == "eps") {
                plan.epsilon = std::stod(value);
                have_eps = true;
            } else if (key == "R") {
                plan.rate = std::stod(value);
                have_r = true;
            } else if (key == "tau") {
                plan.tau = std::stod(value);
                have_tau = true;
            } else if (key == "k0") {
                plan.k0 = std::stoull(value);
                have_k0 = true;
            } else if (key == "n") {
                plan.horizon = std::stoull(value);
                have_n = true;
            } else if (key == "seed") {
                plan.seed = std::stoull(value);
                have_seed = true;
            } else {
                throw ParseError("unknown header field: " + key);
            }
        } catch (const std::invalid_argument&) {
            throw ParseError("malformed value in header field: " + field);
        } catch (const std::out_of_range&) {
            throw ParseError("out-of-range value in header field: " + field);
        }
    }
    if (!(have_eps && have_r && have_tau && have_k0 && have_n && have_seed)) {
        throw ParseError("lincode header is missing fields");
    }
    if (plan.horizon > (std::size_t{1} << 20)) {
        throw ParseError("lincode horizon implausibly large");
    }
    std::vector<BitVector> rows;
    rows.reserve(plan.horizon);
    std::string line;
    for (std::size_t i = 1; i <= plan.horizon; ++i) {
        if (!std::getline(in, line)) throw ParseError("lincode artifact truncated");
        rows.push_back(BitVector::from_hex(line, plan.row_length(i)));
    }
    try {
        return GeneratorSchedule(plan, std::move(rows));
    } catch (const DomainError& e) {
        throw ParseError(std::string("invalid lincode artifact: ") + e.what());
    }
}

double feasibility_margin(double epsilon, double rate, double tau) {
    if (!(rate > 0.0 && rate < tau && tau < 1.0)) {
        throw DomainError("feasibility_margin requires 0 < R < tau < 1");
    }
    if (epsilon < 0.0) throw DomainError("feasibility_margin requires eps >= 0");
    const double ratio = epsilon / (1.0 - rate / tau);
    if (ratio >= 1.0) throw DomainError("infeasible parameters: eps/(1-R/tau) >= 1");
    return 1.0 - tau - binary_entropy(ratio);
}

std::pair<double, double> default_tau(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0 / 17.0)) {
        throw DomainError("default_tau requires 0 < eps < 1/17");
    }
    const double root = std::sqrt(epsilon * std::log2(1.0 / epsilon));
    if (4.0 * root >= 1.0) throw DomainError("eps too large for positive rate");
    const double rate = 1.0 - 4.0 * root;
    const double tau = rate / (1.0 - root);
    if (feasibility_margin(epsilon, rate, tau) <= 0.0) {
        throw DomainError("default_tau produced a non-positive margin");
    }
    return {rate, tau};
}

double bij_log_prob_bound(std::size_t i, std::size_t j, double epsilon, double rate, double tau) {
    if (static_cast<double>(j) < static_cast<double>(i) / rate - 1e-9) {
        throw DomainError("bij_log_prob_bound requires j >= i/R");
    }
    if (!(rate > 0.0 && rate < tau && tau < 1.0)) {
        throw DomainError("bij_log_prob_bound requires 0 < R < tau < 1");
    }
    const double ratio = epsilon / (1.0 - rate / tau);
    if (ratio >= 1.0) throw DomainError("infeasible parameters: eps/(1-R/tau) >= 1");
    return (tau + binary_entropy(ratio) - 1.0) * (1.0 - rate / tau) * static_cast<double>(j);
}

GeneratorSchedule sample_generator(const LinearCodePlan& plan) {
    plan.validate();
    SeededRandomSource rng(plan.seed);
    std::vector<BitVector> rows;
    rows.reserve(plan.horizon);
    for (std::size_t i = 1; i <= plan.horizon; ++i) {
        rows.push_back(rng.next_bits(plan.row_length(i)));
    }
    return GeneratorSchedule(plan, std::move(rows));
}

namespace {

// Shared machinery for the two exhaustive distance verifiers.
//
// For a fixed first-difference position p, the set of difference vectors
// is explored incrementally in j. A "survivor" is a vector x of length
// ceil(tau*j) (first nonzero at p) whose codeword prefix weight is still
// below the largest threshold any remaining j could demand; once the
// weight reaches that bound, every future check on extensions of x passes
// and the branch is dropped. Survivors are kept in lexicographic order so
// the first violation found is the lexicographically smallest witness.
struct Survivor {
    BitVector x;
    std::uint32_t weight;
};

struct PositionScan {
    std::optional<Counterexample> violation;
    std::uint64_t work = 0;
};

// required(j) must be non-decreasing in j.
PositionScan scan_first_difference_position(const GeneratorSchedule& g, std::size_t p,
                                            std::size_t j_start,
                                            const std::function<double(std::size_t)>& required,
                                            std::uint64_t work_budget) {
    const auto& plan = g.plan();
    const std::size_t horizon = g.horizon();
    PositionScan result;

    auto required_weight = [&](std::size_t j) {
        return std::max<std::int64_t>(1, ceil_int(required(j)));
    };
    const std::int64_t weight_bound = required_weight(horizon);

    // First j whose message length reaches p (earlier j have no vectors
    // with first nonzero at p).
    std::size_t j0 = j_start;
    while (j0 <= horizon && plan.row_length(j0) < p) ++j0;
    if (j0 > horizon) return result;

    auto report = [&](const Survivor& s, std::size_t j) {
        Counterexample ce;
        ce.i = p;
        ce.j = j;
        ce.difference = s.x;
        ce.achieved_distance = s.weight;
        ce.required_distance = static_cast<double>(required_weight(j));
        result.violation = ce;
    };

    const std::size_t len0 = plan.row_length(j0);
    const std::size_t free_bits = len0 - p;
    if (free_bits >= 63 || (std::uint64_t{1} << free_bits) > work_budget) {
        throw ScaleExceededError("initial suffix enumeration exceeds the work cap");
    }
    std::vector<Survivor> survivors;
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << free_bits); ++c) {
        BitVector x(len0);
        x.set(p - 1);
        // Big-endian suffix assignment keeps ascending c in lex order.
        for (std::size_t t = 0; t < free_bits; ++t) {
            if ((c >> (free_bits - 1 - t)) & 1) x.set(p + t);
        }
        std::uint32_t w = 0;
        for (std::size_t ell = 1; ell <= j0; ++ell) {
            if (plan.row_length(ell) < p) continue;  // row cannot touch x
            w += g.encode_bit(x, ell) ? 1 : 0;
        }
        ++result.work;
        if (w < required_weight(j0)) {
            report({x, w}, j0);
            return result;
        }
        if (w < weight_bound) survivors.push_back({std::move(x), w});
        if (result.work > work_budget) throw ScaleExceededError("verification work cap exceeded");
    }

    for (std::size_t j = j0 + 1; j <= horizon && !survivors.empty(); ++j) {
        const std::size_t len = plan.row_length(j);
        if (len > plan.row_length(j - 1)) {
            std::vector<Survivor> extended;
            extended.reserve(survivors.size() * 2);
            for (auto& s : survivors) {
                Survivor one = s;
                s.x.push_back(false);
                one.x.push_back(true);
                extended.push_back(std::move(s));
                extended.push_back(std::move(one));
            }
            survivors = std::move(extended);
        }
        const std::int64_t need = required_weight(j);
        std::vector<Survivor> kept;
        kept.reserve(survivors.size());
        for (auto& s : survivors) {
            ++result.work;
            s.weight += g.encode_bit(s.x, j) ? 1 : 0;
            if (s.weight < need) {
                report(s, j);
                return result;
            }
            if (s.weight < weight_bound) kept.push_back(std::move(s));
        }
        survivors = std::move(kept);
        if (result.work > work_budget) throw ScaleExceededError("verification work cap exceeded");
    }
    return result;
}

VerificationReport run_grid(const GeneratorSchedule& g, std::size_t p_min, std::size_t p_max,
                            const std::function<std::size_t(std::size_t)>& j_start,
                            const std::function<double(std::size_t, std::size_t)>& required,
                            std::uint64_t work_cap) {
    VerificationReport report;
    if (p_min > p_max) return report;

    const unsigned threads = std::min<unsigned>(thread_budget(), p_max - p_min + 1);
    std::atomic<std::size_t> best_p{p_max + 1};
    std::atomic<std::uint64_t> work_left{work_cap};
    std::vector<std::optional<Counterexample>> found(p_max - p_min + 1);
    std::vector<std::string> errors(threads);

    auto worker = [&](unsigned tid) {
        try {
            for (std::size_t p = p_min + tid; p <= p_max; p += threads) {
                if (p >= best_p.load(std::memory_order_relaxed)) continue;
                auto required_at_p = [&, p](std::size_t j) { return required(p, j); };
                auto scan = scan_first_difference_position(
                    g, p, j_start(p), required_at_p, work_left.load(std::memory_order_relaxed));
                // Budget is approximate under parallelism; the sequential
                // default (1 thread) enforces it exactly.
                if (scan.work < work_left.load(std::memory_order_relaxed)) {
                    work_left.fetch_sub(scan.work, std::memory_order_relaxed);
                } else {
                    throw ScaleExceededError("verification work cap exceeded");
                }
                if (scan.violation) {
                    found[p - p_min] = scan.violation;
                    std::size_t expected = best_p.load();
                    while (p < expected && !best_p.compare_exchange_weak(expected, p)) {
                    }
                }
            }
        } catch (const std::exception& e) {
            errors[tid] = e.what();
        }
    };

    if (threads <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& t : pool) t.join();
    }
    for (const auto& err : errors) {
        if (!err.empty()) throw ScaleExceededError(err);
    }
    const std::size_t winner = best_p.load();
    if (winner <= p_max) {
        report.passed = false;
        report.counterexample = found[winner - p_min];
    }
    return report;
}

}  // namespace

VerificationReport verify_unbounded_distance(const GeneratorSchedule& schedule,
                                             std::uint64_t work_cap) {
    const auto& plan = schedule.plan();
    const double eps = plan.epsilon;
    const std::size_t p_max = static_cast<std::size_t>(
        std::max<std::int64_t>(0, floor_int(plan.rate * static_cast<double>(schedule.horizon()))));
    auto j_start = [&](std::size_t p) {
        return static_cast<std::size_t>(ceil_int(static_cast<double>(p) / plan.rate));
    };
    auto required = [eps](std::size_t, std::size_t j) { return eps * static_cast<double>(j); };
    return run_grid(schedule, plan.k0, p_max, j_start, required, work_cap);
}

VerificationReport verify_random_error_distance(const GeneratorSchedule& schedule,
                                                std::uint64_t work_cap) {
    const auto& plan = schedule.plan();
    const double eps = plan.epsilon;
    const double r0 = plan.tau;
    const std::size_t p_max = static_cast<std::size_t>(
        std::max<std::int64_t>(0, floor_int(plan.rate * static_cast<double>(schedule.horizon()))));
    // j runs over [max(k0, ceil(k/R)), horizon]: the guarantee is only
    // claimed once the prefix is at least the minimum length k0.
    auto j_start = [&](std::size_t p) {
        const auto by_rate = static_cast<std::size_t>(ceil_int(static_cast<double>(p) / plan.rate));
        return std::max(plan.k0, by_rate);
    };
    auto required = [eps, r0](std::size_t p, std::size_t j) {
        return 3.0 * eps * (static_cast<double>(j) - static_cast<double>(p) / r0);
    };
    return run_grid(schedule, 1, p_max, j_start, required, work_cap);
}

std::size_t min_prefix_distance(const GeneratorSchedule& schedule, std::size_t j,
                                std::size_t max_first, std::size_t probe_cap,
                                std::uint64_t work_cap) {
    const auto& plan = schedule.plan();
    if (j < 1 || j > schedule.horizon()) throw DomainError("min_prefix_distance: j out of range");
    if (probe_cap < 1) throw DomainError("min_prefix_distance: probe_cap must be >= 1");
    std::size_t best = probe_cap;
    std::uint64_t work = 0;
    for (std::size_t p = 1; p <= max_first && best > 0; ++p) {
        if (plan.row_length(j) < p) break;  // no vector of length <= k_j starts here
        std::size_t j0 = 1;
        while (plan.row_length(j0) < p) ++j0;
        j0 = std::min(j0, j);

        const std::size_t len0 = plan.row_length(j0);
        const std::size_t free_bits = len0 - p;
        if (free_bits >= 63 || (std::uint64_t{1} << free_bits) > work_cap) {
            throw ScaleExceededError("min_prefix_distance enumeration exceeds the work cap");
        }
        std::vector<Survivor> survivors;
        for (std::uint64_t c = 0; c < (std::uint64_t{1} << free_bits); ++c) {
            BitVector x(len0);
            x.set(p - 1);
            for (std::size_t t = 0; t < free_bits; ++t) {
                if ((c >> (free_bits - 1 - t)) & 1) x.set(p + t);
            }
            std::uint32_t w = 0;
            for (std::size_t ell = 1; ell <= j0; ++ell) {
                if (plan.row_length(ell) < p) continue;
                w += schedule.encode_bit(x, ell) ? 1 : 0;
            }
            if (++work > work_cap) throw ScaleExceededError("min_prefix_distance work cap");
            if (j0 == j) {
                best = std::min<std::size_t>(best, w);
            } else if (w < best) {
                survivors.push_back({std::move(x), w});
            }
        }
        for (std::size_t jj = j0 + 1; jj <= j && !survivors.empty(); ++jj) {
            if (plan.row_length(jj) > plan.row_length(jj - 1)) {
                std::vector<Survivor> extended;
                extended.reserve(survivors.size() * 2);
                for (auto& s : survivors) {
                    Survivor one = s;
                    s.x.push_back(false);
                    one.x.push_back(true);
                    extended.push_back(std::move(s));
                    extended.push_back(std::move(one));
                }
                survivors = std::move(extended);
            }
            std::vector<Survivor> kept;
            kept.reserve(survivors.size());
            for (auto& s : survivors) {
                if (++work > work_cap) throw ScaleExceededError("min_prefix_distance work cap");
                s.weight += schedule.encode_bit(s.x, jj) ? 1 : 0;
                if (jj == j) {
                    best = std::min<std::size_t>(best, s.weight);
                } else if (s.weight < best) {
                    kept.push_back(std::move(s));
                }
            }
            if (jj < j) survivors = std::move(kept);
        }
    }
    return best;
}

ConstructionResult construct_with_retries(const LinearCodePlan& plan, std::size_t max_attempts,
                                          std::uint64_t work_cap) {
    if (max_attempts < 1) throw DomainError("construct_with_retries requires max_attempts >= 1");
    plan.validate();
    std::optional<Counterexample> last;
    for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
        LinearCodePlan attempt_plan = plan;
        attempt_plan.seed = derive_seed(plan.seed, attempt - 1);
        GeneratorSchedule candidate = sample_generator(attempt_plan);
        VerificationReport report = verify_unbounded_distance(candidate, work_cap);
        if (report.passed) return {std::move(candidate), attempt};
        last = report.counterexample;
    }
    std::string detail = "construction failed after " + std::to_string(max_attempts) + " attempts";
    if (last) {
        detail += "; last counterexample at i=" + std::to_string(last->i) +
                  " j=" + std::to_string(last->j);
    }
    throw ConstructionFailedError(detail, max_attempts);
}

}  // namespace streamcode::lincode
