// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#include <doctest.h>

#include <vector>

#include "streamcode/analysis.hpp"
#include "streamcode/errors.hpp"
#include "streamcode/lincode.hpp"
#include "streamcode/rng.hpp"

using namespace streamcode;
using namespace streamcode::analysis;

namespace {

std::vector<BitVector> identity_rows(std::size_t n) {
    std::vector<BitVector> rows;
    for (std::size_t i = 0; i < n; ++i) {
        BitVector row(n);
        row.set(i);
        rows.push_back(std::move(row));
    }
    return rows;
}

const lincode::LinearCodePlan kSmallPlan{0.01, 0.4, 0.6, 4, 24, 1};

lincode::GeneratorSchedule small_fixture() {
    static const auto result = lincode::construct_with_retries(kSmallPlan, 500);
    return result.schedule;
}

}  // namespace

TEST_SUITE_BEGIN("analysis");

TEST_CASE("rank profile basics") {
    const auto id_rows = identity_rows(6);
    const auto identity = rank_profile(std::span(id_rows));
    for (std::size_t i = 0; i <= 6; ++i) CHECK(identity.values[i] == i);

    const std::vector<BitVector> zeros(5, BitVector(5));
    const auto zero = rank_profile(std::span(zeros));
    for (std::size_t i = 0; i <= 5; ++i) CHECK(zero.values[i] == 0);

    const std::vector<BitVector> rows = {BitVector::from_bits("1"), BitVector::from_bits("11"),
                                         BitVector::from_bits("11")};
    const auto profile = rank_profile(std::span(rows));
    CHECK(profile.values == std::vector<std::size_t>{0, 1, 2, 2});
}

TEST_CASE("rank profile invariants on a sampled schedule") {
    const auto g = small_fixture();
    const auto profile = rank_profile(g, g.horizon());
    CHECK(profile.values[0] == 0);
    for (std::size_t i = 1; i < profile.values.size(); ++i) {
        const std::size_t step = profile.values[i] - profile.values[i - 1];
        CHECK(step <= 1);
        CHECK(profile.values[i] <= i);
    }
}

TEST_CASE("profile inverse returns the minimal index, with a sentinel") {
    const std::vector<BitVector> rows = {BitVector::from_bits("1"), BitVector::from_bits("11"),
                                         BitVector::from_bits("11")};
    const auto profile = rank_profile(std::span(rows));
    CHECK(profile.inverse(0) == 0);
    CHECK(profile.inverse(1) == 1);
    CHECK(profile.inverse(2) == 2);
    CHECK(profile.inverse(3) == 4);  // horizon + 1 sentinel
}

TEST_CASE("redundancy upper bound checker") {
    // Rate-1 injective prefix code: r(i) = 0 everywhere.
    const auto id_rows = identity_rows(12);
    const auto identity = rank_profile(std::span(id_rows));
    CHECK(check_redundancy_upper(redundancy_profile(identity), 0.9, 2).passed);

    // Verified fixture satisfies the bound at its own rate.
    const auto g = small_fixture();
    const auto profile = redundancy_profile(rank_profile(g, g.horizon()));
    CHECK(check_redundancy_upper(profile, kSmallPlan.rate, kSmallPlan.k0).passed);

    // Ten constant bits prepended: r(i) = i there, violating the bound.
    std::vector<BitVector> padded(10, BitVector(22));
    for (const auto& row : identity_rows(12)) {
        BitVector wide(22);
        for (std::size_t t = 0; t < 12; ++t) wide.set(10 + t, row.get(t));
        padded.push_back(wide);
    }
    const auto control = redundancy_profile(rank_profile(std::span(padded)));
    const auto report = check_redundancy_upper(control, 0.5, 4);
    REQUIRE(!report.passed);
    CHECK(report.counterexample->i == 4);  // r(4) = 4 > 0.5*4 + 1
}

TEST_CASE("rank/redundancy inequality checker from the distance property") {
    // epsilon*j < 1 in range: vacuously true.
    const auto g = small_fixture();
    const auto profile = rank_profile(g, g.horizon());
    CHECK(check_linearsub(profile, kSmallPlan.epsilon, kSmallPlan.rate, kSmallPlan.k0).passed);

    // Rate-1 code with a fake epsilon claim: r == 0 while eps*j - 1 > 0.
    const auto id_rows = identity_rows(30);
    const auto identity = rank_profile(std::span(id_rows));
    const auto report = check_linearsub(identity, 0.1, 0.9, 2);
    REQUIRE(!report.passed);
    CHECK(report.counterexample->note == "r(j) - r(H^-1(i)) fell below eps*j - 1");
}

TEST_CASE("untestable pairs are reported, not guessed") {
    // All-zero rows: H never reaches i, so every (i, j) pair is skipped.
    const std::vector<BitVector> zeros(12, BitVector(12));
    const auto profile = rank_profile(std::span(zeros));
    const auto report = check_linearsub(profile, 0.01, 0.5, 2);
    CHECK(report.passed);
    CHECK(report.skipped_pairs > 0);
}

TEST_CASE("entropy profile equals the rank profile on linear codes") {
    const auto g = small_fixture();
    const std::size_t m = g.plan().message_bits();  // 15 <= 16
    REQUIRE(m <= 16);
    const auto ranks = rank_profile(g, g.horizon());
    const auto entropy = prefix_entropy_profile(
        [&g](const BitVector& msg) { return g.encode_prefix(msg, g.horizon()); }, m,
        g.horizon());
    REQUIRE(entropy.size() == ranks.values.size());
    for (std::size_t i = 0; i < entropy.size(); ++i) {
        // Exact dyadic counts make the entropies exactly integral here.
        CHECK(entropy[i] == static_cast<double>(ranks.values[i]));
    }
}

TEST_CASE("entropy profile of a nonlinear encoder with a constant position") {
    // 3-bit message -> 5-bit word: bit 2 is constant, bit 3 nonlinear.
    const auto encoder = [](const BitVector& msg) {
        BitVector out(5);
        out.set(0, msg.get(0));
        out.set(1, msg.get(1));
        out.set(2, false);
        out.set(3, msg.get(0) && msg.get(2));
        out.set(4, msg.get(2));
        return out;
    };
    const auto entropy = prefix_entropy_profile(encoder, 3, 5);
    CHECK(entropy[0] == 0.0);
    CHECK(entropy[1] == 1.0);
    CHECK(entropy[2] == 2.0);
    CHECK(entropy[3] == 2.0);  // constant bit adds nothing
    // Prefix groups have sizes 2,2,1,1,1,1: H = 3 - 4/8 = 2.5 exactly.
    CHECK(entropy[4] == 2.5);
    CHECK(entropy[5] == 3.0);
    // Increments stay in [0, 1].
    for (std::size_t i = 1; i < entropy.size(); ++i) {
        CHECK(entropy[i] - entropy[i - 1] >= -1e-12);
        CHECK(entropy[i] - entropy[i - 1] <= 1.0 + 1e-12);
    }
}

TEST_CASE("entropy redundancy checker") {
    const auto identity_encoder = [](const BitVector& msg) { return msg; };
    const auto good = prefix_entropy_profile(identity_encoder, 10, 10);
    CHECK(check_entropy_r_upper(good, 1.0, 2).passed);

    // Ten constant bits before the message: fails for small i.
    const auto padded_encoder = [](const BitVector& msg) {
        BitVector out(20);
        for (std::size_t t = 0; t < 10; ++t) out.set(10 + t, msg.get(t));
        return out;
    };
    const auto control = prefix_entropy_profile(padded_encoder, 10, 20);
    const auto report = check_entropy_r_upper(control, 0.5, 4);
    REQUIRE(!report.passed);
    CHECK(report.counterexample->i == 4);
}

TEST_CASE("entropy profile refuses oversized enumerations") {
    const auto encoder = [](const BitVector& msg) { return msg; };
    CHECK_THROWS_AS(prefix_entropy_profile(encoder, 17, 17), ScaleExceededError);
}

TEST_SUITE_END();
