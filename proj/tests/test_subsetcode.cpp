// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#include <doctest.h>

#include <algorithm>
#include <bit>
#include <set>

#include "streamcode/errors.hpp"
#include "streamcode/numeric.hpp"
#include "streamcode/rng.hpp"
#include "streamcode/subsetcode.hpp"

using namespace streamcode;
using namespace streamcode::subsetcode;

TEST_SUITE_BEGIN("subsetcode");

TEST_CASE("trivial two-set code at n=8, delta=0.25") {
    const SubsetCode code = trivial_two_set(8, 0.25);
    CHECK(code.params().K == 2);
    CHECK(code.params().T == 37);
    CHECK(code.subsets()[0].size() == 37);  // weights <= 2: 1 + 8 + 28
    CHECK(code.subsets()[1].size() == 37);  // weights >= 6
    std::size_t min_cross = 8;
    for (const auto& x : code.subsets()[0]) {
        for (const auto& y : code.subsets()[1]) {
            min_cross = std::min(min_cross, hamming_distance(x, y));
        }
    }
    CHECK(min_cross == 4);  // > delta*n = 2
    CHECK(verify_subset_distance(code).passed);
    // Lexicographically first low-weight vector is zero.
    CHECK(code.encode(0, 0) == BitVector(8));
}

TEST_CASE("trivial two-set at delta=1 degenerates to the two constants") {
    const SubsetCode code = trivial_two_set(6, 1.0);
    CHECK(code.params().T == 1);
    CHECK(code.subsets()[0].size() == 1);
    CHECK(code.subsets()[1].size() == 1);
    CHECK(code.encode(0, 0) == BitVector(6));
    CHECK(code.encode(1, 0) == BitVector::from_bits("111111"));
    CHECK(hamming_distance(code.encode(0, 0), code.encode(1, 0)) == 6);
    CHECK(verify_subset_distance(code).passed);
}

TEST_CASE("trivial two-set rejects degenerate parameters") {
    CHECK_THROWS_AS(trivial_two_set(8, 0.01), DomainError);  // delta*n < 1
}

TEST_CASE("greedy construction at the pinned seed") {
    const SubsetCode code = greedy_construct(14, 4, 1.0 / 7.0, 1);
    CHECK(code.params().K == 8);
    CHECK(code.params().n == 14);
    // r = 3 since |B(3)| = 470 <= 2^10 = 1024 < |B(4)| = 1471; subsets are
    // built from radius r - floor(delta*n) = 1 balls, so each has at
    // least ceil(|B(1)|/2) = 8 points.
    for (const auto& subset : code.subsets()) CHECK(subset.size() >= 8);
    CHECK(code.params().T >= 8);
    CHECK(verify_subset_distance(code).passed);
    CHECK(code.centers().size() == 8);

    // Determinism.
    const SubsetCode again = greedy_construct(14, 4, 1.0 / 7.0, 1);
    CHECK(again.subsets() == code.subsets());
}

TEST_CASE("greedy soundness: claimed points keep their distance from the rest") {
    const SubsetCode code = greedy_construct(14, 4, 1.0 / 7.0, 1);
    const std::size_t floor_delta_n = 2;  // floor((1/7)*14)
    // Later subsets live in the point set that remained after each
    // removal, so every pair (x in S_i, y in S_j) with j > i must be at
    // distance >= floor(delta*n); checked exhaustively.
    for (std::size_t a = 0; a < code.subsets().size(); ++a) {
        for (std::size_t b = a + 1; b < code.subsets().size(); ++b) {
            for (const auto& x : code.subsets()[a]) {
                for (const auto& y : code.subsets()[b]) {
                    CHECK(hamming_distance(x, y) >= floor_delta_n);
                }
            }
        }
    }
}

TEST_CASE("single-subset and degenerate-delta greedy cases") {
    const SubsetCode one = greedy_construct(10, 1, 0.3, 5);
    CHECK(one.params().K == 1);
    CHECK(verify_subset_distance(one).passed);  // no cross pairs to test

    // delta = 0 with k = n: r = 0, subsets are single points.
    const SubsetCode points = greedy_construct(6, 6, 0.0, 5);
    CHECK(points.params().K == 32);
    for (const auto& subset : points.subsets()) CHECK(subset.size() == 1);
    CHECK(verify_subset_distance(points).passed);
}

TEST_CASE("verify catches duplicated vectors and short subsets") {
    SubsetCodeParams params{2, 1, 0.5, 4};
    const BitVector shared = BitVector::from_bits("0011");
    const SubsetCode dup(params, {{shared}, {shared}});
    const auto report = verify_subset_distance(dup);
    CHECK(!report.passed);
    CHECK(report.counterexample->note == "subsets are not disjoint");
}

TEST_CASE("verify catches close cross pairs") {
    SubsetCodeParams params{2, 1, 0.5, 4};
    const SubsetCode close(params, {{BitVector::from_bits("0000")},
                                    {BitVector::from_bits("0001")}});
    const auto report = verify_subset_distance(close);
    CHECK(!report.passed);
    CHECK(report.counterexample->achieved_distance == 1);
    CHECK(report.counterexample->required_distance == 2.0);
}

TEST_CASE("encode/decode round trips and robustness") {
    const SubsetCode code = greedy_construct(14, 4, 1.0 / 7.0, 1);
    const std::size_t K = code.params().K, T = code.params().T;
    std::set<std::string> seen;
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t t = 0; t < T; ++t) {
            const BitVector word = code.encode(k, t);
            CHECK(seen.insert(word.to_hex()).second);  // injectivity
            CHECK(code.decode_exact(word) == std::pair{k, t});
            CHECK(code.decode_robust(word) == k);
        }
    }
    CHECK_THROWS_AS(code.encode(K, 0), DomainError);
    CHECK_THROWS_AS(code.encode(0, T), DomainError);
    // A corrupted word is no longer an exact codeword.
    BitVector corrupted = code.encode(0, 0);
    corrupted.flip(3);
    CHECK_THROWS_AS(code.decode_exact(corrupted), NotACodewordError);
}

TEST_CASE("robust decode survives single flips on the trivial code") {
    // Cross distance 4 gives radius floor((4-1)/2) = 1; exhaustive over
    // all single flips of all encodings.
    const SubsetCode code = trivial_two_set(8, 0.25);
    for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t t = 0; t < code.params().T; ++t) {
            for (std::size_t pos = 0; pos < 8; ++pos) {
                BitVector word = code.encode(k, t);
                word.flip(pos);
                CHECK(code.decode_robust(word) == k);
            }
        }
    }
}

TEST_CASE("robust decode tie-break picks the smallest subset index") {
    SubsetCodeParams params{2, 1, 0.5, 4};
    const SubsetCode code(params, {{BitVector::from_bits("0000")},
                                   {BitVector::from_bits("1100")}});
    // 1000 is at distance 1 from both subsets.
    CHECK(code.decode_robust(BitVector::from_bits("1000")) == 0);
}

TEST_CASE("harper impossibility bound") {
    // (14, 4, 1/7): minimal r with |B(r)| >= 1024 is 4; bound is
    // |B(ceil(4 - 1) + 2)| = |B(5)| = 3473.
    CHECK(harper_impossibility_T(14, 4, 1.0 / 7.0) == 3473);
    // delta = 0 specializes to |B(r + 2)|.
    CHECK(harper_impossibility_T(14, 4, 0.0) == ball_size(14, 6));
    // Constructed codes never violate the bound.
    const SubsetCode greedy = greedy_construct(14, 4, 1.0 / 7.0, 1);
    std::size_t log2K = 0;
    while ((std::size_t{1} << log2K) < greedy.params().K) ++log2K;
    CHECK(BigInt(greedy.params().T) <
          harper_impossibility_T(14, log2K + 1, greedy.params().delta));
    const SubsetCode trivial = trivial_two_set(8, 0.25);
    CHECK(BigInt(trivial.params().T) < harper_impossibility_T(8, 2, 0.25));
}

TEST_CASE("linear subset bound exponent") {
    CHECK(linear_subset_bound_exponent(0.5, 0.05) ==
          doctest::Approx(0.39195179762782).epsilon(1e-10));
    // delta -> 0 recovers alpha.
    CHECK(linear_subset_bound_exponent(0.5, 1e-9) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK_THROWS_AS(linear_subset_bound_exponent(0.05, 0.5), DomainError);
}

TEST_CASE("exponent diagnostics are ordered sensibly") {
    for (double alpha : {0.3, 0.5, 0.7}) {
        for (double delta : {0.01, 0.05}) {
            // The greedy construction cannot beat the impossibility bound.
            CHECK(greedy_exponent(alpha, delta) <= impossibility_exponent(alpha, delta));
        }
    }
    CHECK(greedy_regime_ok(0.5, 0.01));
    CHECK(!greedy_regime_ok(0.5, 0.4));
}

TEST_CASE("affine dilation bound from the linear impossibility proof") {
    // For every linear subspace V of F_2^10 with dim <= 3 (cosets behave
    // identically by translation invariance):
    //   |V + B(1)| >= |V| * C(10 - dim, <= 1),
    // because dim coordinates are shattered by V. Exhaustive over all
    // subspaces via row-echelon enumeration; dimension 4 is covered by a
    // seeded sample for time.
    const std::size_t n = 10;
    const auto check_subspace = [&](const std::vector<std::uint32_t>& basis) {
        const std::size_t dim = basis.size();
        std::vector<std::uint32_t> points(std::size_t{1} << dim, 0);
        for (std::size_t c = 1; c < points.size(); ++c) {
            points[c] = points[c & (c - 1)] ^ basis[std::countr_zero(c)];
        }
        std::vector<std::uint64_t> bitmap(1 << (n - 6), 0);
        std::size_t dilation = 0;
        auto mark = [&](std::uint32_t p) {
            if (!((bitmap[p >> 6] >> (p & 63)) & 1)) {
                bitmap[p >> 6] |= std::uint64_t{1} << (p & 63);
                ++dilation;
            }
        };
        for (const auto p : points) {
            mark(p);
            for (std::size_t b = 0; b < n; ++b) mark(p ^ (std::uint32_t{1} << b));
        }
        const std::size_t lower = points.size() * (1 + (n - dim));
        return dilation >= lower;
    };

    // All echelon bases of dimension 1..3.
    std::size_t checked = 0;
    for (std::size_t dim = 1; dim <= 3; ++dim) {
        std::vector<std::uint32_t> pivots(dim);
        std::function<void(std::size_t, std::size_t, std::vector<std::uint32_t>&)> rec =
            [&](std::size_t level, std::size_t from, std::vector<std::uint32_t>& basis) {
                if (level == dim) {
                    // Fill free positions of each basis row above its pivot.
                    std::function<void(std::size_t)> fill = [&](std::size_t row) {
                        if (row == dim) {
                            ++checked;
                            CHECK(check_subspace(basis));
                            return;
                        }
                        // Free coordinates: positions > pivot(row) that are
                        // not pivots of later rows.
                        std::vector<std::size_t> free;
                        for (std::size_t b = pivots[row] + 1; b < n; ++b) {
                            bool is_pivot = false;
                            for (std::size_t r2 = 0; r2 < dim; ++r2) {
                                if (pivots[r2] == b) is_pivot = true;
                            }
                            if (!is_pivot) free.push_back(b);
                        }
                        for (std::uint32_t mask = 0; mask < (1u << free.size()); ++mask) {
                            std::uint32_t row_vec = std::uint32_t{1} << pivots[row];
                            for (std::size_t t = 0; t < free.size(); ++t) {
                                if ((mask >> t) & 1) row_vec |= std::uint32_t{1} << free[t];
                            }
                            basis[row] = row_vec;
                            fill(row + 1);
                        }
                    };
                    fill(0);
                    return;
                }
                for (std::size_t b = from; b < n; ++b) {
                    pivots[level] = b;
                    rec(level + 1, b + 1, basis);
                }
            };
        std::vector<std::uint32_t> basis(dim);
        rec(0, 0, basis);
    }
    CHECK(checked > 100000);

    // Seeded sample of dimension-4 subspaces.
    SeededRandomSource rng(77);
    for (int trial = 0; trial < 2000; ++trial) {
        GF2Basis gb;
        std::vector<std::uint32_t> basis;
        while (basis.size() < 4) {
            const auto cand = static_cast<std::uint32_t>(rng.next_below(1u << n));
            if (cand != 0 && gb.insert(BitVector::from_uint(cand, n))) basis.push_back(cand);
        }
        CHECK(check_subspace(basis));
    }
}

TEST_CASE("exact-integer delta*n is flagged in the report") {
    // (1/7)*14 = 2 exactly: the strict/non-strict boundary is live.
    const auto flagged = verify_subset_distance(greedy_construct(14, 4, 1.0 / 7.0, 1));
    CHECK(flagged.passed);
    CHECK(flagged.note.find("exact integer") != std::string::npos);

    // 0.25*9 = 2.25: no ambiguity, no note.
    SubsetCodeParams params{2, 1, 0.25, 9};
    const SubsetCode apart(params, {{BitVector::from_bits("000000000")},
                                    {BitVector::from_bits("111000000")}});
    const auto plain = verify_subset_distance(apart);
    CHECK(plain.passed);
    CHECK(plain.note.empty());
}

TEST_CASE("serialization round trip is bit exact") {
    const SubsetCode code = greedy_construct(14, 4, 1.0 / 7.0, 1);
    const std::string text = code.serialize();
    const SubsetCode parsed = SubsetCode::parse(text);
    CHECK(parsed.subsets() == code.subsets());
    CHECK(parsed.params().K == code.params().K);
    CHECK(parsed.params().T == code.params().T);
    CHECK(parsed.serialize() == text);
    CHECK_THROWS_AS(SubsetCode::parse("subsetcode v2"), ParseError);
}

TEST_CASE("mutated artifacts either parse or raise ParseError") {
    const std::string text = greedy_construct(14, 4, 1.0 / 7.0, 1).serialize();
    SeededRandomSource rng(404);
    for (int trial = 0; trial < 300; ++trial) {
        std::string mutated = text;
        const std::size_t edits = 1 + rng.next_below(3);
        for (std::size_t e = 0; e < edits; ++e) {
            const std::size_t pos = rng.next_below(mutated.size());
            mutated[pos] = static_cast<char>(32 + rng.next_below(95));
        }
        try {
            const SubsetCode parsed = SubsetCode::parse(mutated);
            (void)parsed;
        } catch (const ParseError&) {
        }
    }
}

TEST_SUITE_END();
