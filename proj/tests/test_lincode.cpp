// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#include <doctest.h>

#include <bit>
#include <vector>

#include "streamcode/errors.hpp"
#include "streamcode/lincode.hpp"
#include "streamcode/numeric.hpp"
#include "streamcode/rng.hpp"

using namespace streamcode;
using namespace streamcode::lincode;

namespace {

// Rows e_1, e_2, ...: a rate-1 prefix code with no redundancy at all.
GeneratorSchedule identity_schedule(double eps, std::size_t horizon) {
    LinearCodePlan plan{eps, 0.9, 0.99, 2, horizon, 0};
    std::vector<BitVector> rows;
    for (std::size_t i = 1; i <= horizon; ++i) {
        BitVector row(plan.row_length(i));
        row.set(i - 1);
        rows.push_back(std::move(row));
    }
    return GeneratorSchedule(plan, std::move(rows));
}

GeneratorSchedule zero_schedule(double eps, std::size_t horizon) {
    LinearCodePlan plan{eps, 0.9, 0.99, 2, horizon, 0};
    std::vector<BitVector> rows;
    for (std::size_t i = 1; i <= horizon; ++i) rows.emplace_back(plan.row_length(i));
    return GeneratorSchedule(plan, std::move(rows));
}

const LinearCodePlan kSmallPlan{0.01, 0.4, 0.6, 4, 24, 1};

}  // namespace

TEST_SUITE_BEGIN("lincode");

TEST_CASE("feasibility margin") {
    CHECK(feasibility_margin(0.01, 0.5, 0.7) ==
          doctest::Approx(0.08112227346099).epsilon(1e-10));
    CHECK(feasibility_margin(1e-9, 0.5, 0.7) == doctest::Approx(1.0 - 0.7).epsilon(1e-6));
    CHECK(feasibility_margin(0.02, 0.55, 0.75) < 0.0);
    CHECK_THROWS_AS(feasibility_margin(0.5, 0.5, 0.7), DomainError);   // ratio >= 1
    CHECK_THROWS_AS(feasibility_margin(0.01, 0.7, 0.5), DomainError);  // R >= tau
}

TEST_CASE("default tau") {
    const auto [rate, tau] = default_tau(0.001);
    CHECK(rate == doctest::Approx(0.60068490066791).epsilon(1e-10));
    CHECK(tau == doctest::Approx(0.66730071332428).epsilon(1e-10));
    CHECK(feasibility_margin(0.001, rate, tau) > 0.0);
    CHECK_THROWS_AS(default_tau(1.0 / 17.0), DomainError);
    CHECK_THROWS_AS(default_tau(0.05), DomainError);  // 4*sqrt(eps*lg(1/eps)) >= 1

    const auto [r_small, t_small] = default_tau(1e-8);
    CHECK(r_small > 0.99);
    CHECK(t_small > r_small);
    CHECK(t_small < 1.0);
}

TEST_CASE("bij log probability bound") {
    CHECK(bij_log_prob_bound(400, 1000, 0.01, 0.5, 0.7) ==
          doctest::Approx(-23.17779241743).epsilon(1e-9));
    // Linear in j.
    CHECK(bij_log_prob_bound(400, 2000, 0.01, 0.5, 0.7) ==
          doctest::Approx(2.0 * bij_log_prob_bound(400, 1000, 0.01, 0.5, 0.7)).epsilon(1e-12));
    // Infeasible parameters flip the sign (vacuous bound).
    CHECK(bij_log_prob_bound(400, 1000, 0.02, 0.55, 0.75) > 0.0);
    CHECK_THROWS_AS(bij_log_prob_bound(600, 1000, 0.01, 0.5, 0.7), DomainError);  // j < i/R
}

TEST_CASE("margin and bound are consistent") {
    for (const auto& [eps, rate, tau] :
         {std::tuple{0.01, 0.5, 0.7}, std::tuple{0.001, 0.6, 0.67}, std::tuple{0.02, 0.55, 0.75}}) {
        const double margin = feasibility_margin(eps, rate, tau);
        bool all_negative = true;
        for (std::size_t j = 100; j <= 1000; j += 100) {
            const std::size_t i = static_cast<std::size_t>(rate * j) / 2;
            if (bij_log_prob_bound(i, j, eps, rate, tau) >= 0.0) all_negative = false;
        }
        CHECK(all_negative == (margin > 0.0));
    }
}

TEST_CASE("sampling is deterministic with the documented row lengths") {
    const GeneratorSchedule a = sample_generator(kSmallPlan);
    const GeneratorSchedule b = sample_generator(kSmallPlan);
    for (std::size_t i = 1; i <= a.horizon(); ++i) {
        CHECK(a.row(i) == b.row(i));
        CHECK(a.row(i).size() == static_cast<std::size_t>(ceil_int(kSmallPlan.tau * double(i))));
    }
    std::size_t ones = 0, total = 0;
    LinearCodePlan big = kSmallPlan;
    big.horizon = 200;
    const GeneratorSchedule wide = sample_generator(big);
    for (std::size_t i = 1; i <= wide.horizon(); ++i) {
        ones += wide.row(i).weight();
        total += wide.row(i).size();
    }
    const double fraction = double(ones) / double(total);
    CHECK(fraction > 0.45);
    CHECK(fraction < 0.55);
}

TEST_CASE("encode by hand") {
    LinearCodePlan plan{0.1, 0.5, 0.9, 1, 3, 0};
    const GeneratorSchedule g(plan, {BitVector::from_bits("1"), BitVector::from_bits("11"),
                                     BitVector::from_bits("011")});
    CHECK(g.encode_prefix(BitVector::from_bits("110"), 3) == BitVector::from_bits("101"));
    // Zero message encodes to zero; linearity.
    CHECK(g.encode_prefix(BitVector(3), 3) == BitVector(3));
    const BitVector x = BitVector::from_bits("101"), y = BitVector::from_bits("011");
    CHECK(g.encode_prefix(x ^ y, 3) == (g.encode_prefix(x, 3) ^ g.encode_prefix(y, 3)));
    CHECK_THROWS_AS(g.encode_prefix(x, 4), DomainError);
    // Short messages are implicitly zero-padded.
    CHECK(g.encode_prefix(BitVector::from_bits("1"), 3) ==
          g.encode_prefix(BitVector::from_bits("100"), 3));
}

TEST_CASE("linearity reduction: pair distance equals difference weight") {
    const GeneratorSchedule g = sample_generator(kSmallPlan);
    SeededRandomSource rng(99);
    const std::size_t m = kSmallPlan.message_bits();
    for (int trial = 0; trial < 10; ++trial) {
        const BitVector y1 = rng.next_bits(m);
        const BitVector y2 = rng.next_bits(m);
        for (const std::size_t j : {8u, 16u, 24u}) {
            CHECK(hamming_distance(g.encode_prefix(y1, j), g.encode_prefix(y2, j)) ==
                  g.encode_prefix(y1 ^ y2, j).weight());
        }
    }
}

TEST_CASE("identity block schedule fails with a weight-1 counterexample") {
    const GeneratorSchedule g = identity_schedule(0.1, 30);
    const auto report = verify_unbounded_distance(g);
    REQUIRE(!report.passed);
    REQUIRE(report.counterexample.has_value());
    const auto& ce = *report.counterexample;
    CHECK(ce.i == 2);
    CHECK(ce.j == 11);  // first j with ceil(0.1*j) = 2
    CHECK(ce.achieved_distance == 1);
    CHECK(ce.required_distance == 2.0);
    CHECK(ce.difference.first_set() == 1);
    CHECK(ce.difference.weight() == 1);
}

TEST_CASE("tiny epsilon reduces verification to injectivity") {
    // Thresholds stay at 1 across this horizon, so the identity schedule
    // (injective prefixes) passes and the zero schedule fails.
    CHECK(verify_unbounded_distance(identity_schedule(0.001, 30)).passed);
    const auto report = verify_unbounded_distance(zero_schedule(0.001, 30));
    REQUIRE(!report.passed);
    CHECK(report.counterexample->achieved_distance == 0);
}

TEST_CASE("epsilon zero is exactly the injectivity check") {
    CHECK(verify_unbounded_distance(identity_schedule(0.0, 30)).passed);
    CHECK(!verify_unbounded_distance(zero_schedule(0.0, 30)).passed);
    CHECK(verify_random_error_distance(identity_schedule(0.0, 30)).passed);
    CHECK(!verify_random_error_distance(zero_schedule(0.0, 30)).passed);
}

TEST_CASE("verification is monotone under truncation") {
    const auto result = construct_with_retries(kSmallPlan, 500);
    CHECK(verify_unbounded_distance(result.schedule).passed);
    for (std::size_t shorter = 12; shorter < 24; shorter += 4) {
        CHECK(verify_unbounded_distance(result.schedule.truncated(shorter)).passed);
    }
}

TEST_CASE("construct_with_retries reports attempts and reseeds deterministically") {
    const auto result = construct_with_retries(kSmallPlan, 500);
    CHECK(result.attempts >= 1);
    // The passing schedule is the plain sample at the derived seed.
    LinearCodePlan derived = kSmallPlan;
    derived.seed = derive_seed(kSmallPlan.seed, result.attempts - 1);
    CHECK(sample_generator(derived).rows() == result.schedule.rows());
    // Re-running returns the same attempt count.
    CHECK(construct_with_retries(kSmallPlan, 500).attempts == result.attempts);
}

TEST_CASE("construction exhausts on impossible distance") {
    LinearCodePlan plan{0.9, 0.4, 0.6, 4, 24, 1};
    CHECK_THROWS_AS(construct_with_retries(plan, 5), ConstructionFailedError);
}

TEST_CASE("plans reject out-of-domain parameters") {
    CHECK_THROWS_AS((LinearCodePlan{1.0, 0.4, 0.6, 4, 24, 1}).validate(), DomainError);
    CHECK_THROWS_AS((LinearCodePlan{0.01, 0.6, 0.4, 4, 24, 1}).validate(), DomainError);
    CHECK_THROWS_AS((LinearCodePlan{0.01, 0.4, 0.6, 0, 24, 1}).validate(), DomainError);
    CHECK_THROWS_AS((LinearCodePlan{0.01, 0.4, 0.6, 20, 24, 1}).validate(), DomainError);
}

TEST_CASE("prefix support invariant is enforced") {
    LinearCodePlan plan{0.01, 0.4, 0.6, 4, 4, 1};
    // Row 1 must have length ceil(0.6) = 1.
    CHECK_THROWS_AS(GeneratorSchedule(plan, {BitVector(2), BitVector(2), BitVector(2), BitVector(3)}),
                    DomainError);
}

TEST_CASE("serialization round trip is bit exact") {
    const auto result = construct_with_retries(kSmallPlan, 500);
    const std::string text = result.schedule.serialize();
    const GeneratorSchedule parsed = GeneratorSchedule::parse(text);
    CHECK(parsed.rows() == result.schedule.rows());
    CHECK(parsed.plan().epsilon == result.schedule.plan().epsilon);
    CHECK(parsed.plan().seed == result.schedule.plan().seed);
    CHECK(parsed.serialize() == text);
    CHECK_THROWS_AS(GeneratorSchedule::parse("lincode v2 nope"), ParseError);
    CHECK_THROWS_AS(GeneratorSchedule::parse("lincode v1 eps=0.1"), ParseError);
}

TEST_CASE("random-error verifier on the identity and zero schedules") {
    // Identity-style schedule: weight-1 codewords fail once
    // 3*eps*(j - k/r0) exceeds 1.
    const auto bad = verify_random_error_distance(identity_schedule(0.1, 30));
    CHECK(!bad.passed);
    CHECK(bad.counterexample->achieved_distance <= 1);
    // Tiny epsilon: reduces to injectivity.
    CHECK(verify_random_error_distance(identity_schedule(0.001, 30)).passed);
    CHECK(!verify_random_error_distance(zero_schedule(0.001, 30)).passed);
}

TEST_CASE("work cap raises scale-exceeded instead of truncating") {
    CHECK_THROWS_AS(verify_unbounded_distance(sample_generator(kSmallPlan), 10),
                    ScaleExceededError);
}

TEST_CASE("measured prefix distance matches a full enumeration") {
    // Oracle: Gray-code walk over every nonzero message of the prefix
    // code, tracking the minimum codeword weight by first-nonzero
    // position.
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        LinearCodePlan plan{0.05, 0.4, 0.6, 2, 20, seed};
        const GeneratorSchedule g = sample_generator(plan);
        for (const std::size_t j : {10u, 16u, 20u}) {
            const std::size_t m = plan.row_length(j);
            std::vector<std::uint64_t> column(m);
            for (std::size_t t = 0; t < m; ++t) {
                BitVector e(m);
                e.set(t);
                column[t] = g.encode_prefix(e, j).to_uint();
            }
            for (const std::size_t max_first : {1u, 3u, 6u}) {
                std::uint64_t cw = 0, gray = 0;
                std::size_t expected = 8;  // probe cap
                for (std::uint64_t c = 1; c < (std::uint64_t{1} << m); ++c) {
                    const std::uint64_t next = c ^ (c >> 1);
                    cw ^= column[std::countr_zero(gray ^ next)];
                    gray = next;
                    if (static_cast<std::size_t>(std::countr_zero(gray)) < max_first) {
                        expected = std::min<std::size_t>(
                            expected, static_cast<std::size_t>(std::popcount(cw)));
                    }
                }
                CHECK(min_prefix_distance(g, j, max_first, 8) == expected);
            }
        }
    }
}

TEST_CASE("mutated lincode artifacts either parse or raise ParseError") {
    const std::string text = sample_generator(kSmallPlan).serialize();
    SeededRandomSource rng(505);
    for (int trial = 0; trial < 300; ++trial) {
        std::string mutated = text;
        const std::size_t edits = 1 + rng.next_below(3);
        for (std::size_t e = 0; e < edits; ++e) {
            mutated[rng.next_below(mutated.size())] = static_cast<char>(32 + rng.next_below(95));
        }
        try {
            const GeneratorSchedule parsed = GeneratorSchedule::parse(mutated);
            (void)parsed;
        } catch (const ParseError&) {
        }
    }
}

TEST_SUITE_END();
