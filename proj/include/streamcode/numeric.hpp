// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace streamcode {

using BigInt = boost::multiprecision::cpp_int;

/// H(p) = -p log2 p - (1-p) log2(1-p), with H(0) = H(1) = 0.
/// Throws DomainError for p outside [0, 1]. Base-2 throughout.
double binary_entropy(double p);

/// The unique p in [0, 1/2] with |H(p) - y| <= 1e-12, by bisection.
double binary_entropy_inverse(double y);

/// Exact binomial coefficient C(n, k); 0 when k > n.
BigInt binomial(std::uint64_t n, std::uint64_t k);

/// |B(r)| in F_2^n: sum of C(n, i) for i = 0..min(r, n), exact.
BigInt ball_size(std::uint64_t n, std::uint64_t r);

/// log2 of ball_size(n, r), computed in log space for large n where the
/// exact integer would be unwieldy.
double ball_size_log2(std::uint64_t n, std::uint64_t r);

// Integer rounding of real-valued thresholds like ceil(eps*j) or
// floor(R*n). The 1e-9 nudge absorbs float noise in products whose exact
// value is integral (e.g. (1/7)*14), which would otherwise round the
// wrong way.
std::int64_t ceil_int(double x);
std::int64_t floor_int(double x);

}  // namespace streamcode
