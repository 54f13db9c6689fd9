// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#include "streamcode/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "streamcode/errors.hpp"

namespace streamcode {

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binary_entropy requires p in [0,1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double binary_entropy_inverse(double y) {
    if (!(y >= 0.0 && y <= 1.0)) throw DomainError("binary_entropy_inverse requires y in [0,1]");
    if (y == 0.0) return 0.0;
    if (y == 1.0) return 0.5;
    double lo = 0.0, hi = 0.5;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double h = binary_entropy(mid);
        if (std::abs(h - y) <= 1e-12) return mid;
        if (h < y) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt b = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        b *= n - (k - i);
        b /= i;
    }
    return b;
}

BigInt ball_size(std::uint64_t n, std::uint64_t r) {
    const std::uint64_t top = std::min(r, n);
    BigInt total = 0;
    BigInt term = 1;  // C(n, 0)
    for (std::uint64_t i = 0;; ++i) {
        total += term;
        if (i == top) break;
        term *= n - i;
        term /= i + 1;
    }
    return total;
}

double ball_size_log2(std::uint64_t n, std::uint64_t r) {
    const std::uint64_t top = std::min(r, n);
    // log-sum-exp over log2 C(n, i) computed with lgamma.
    auto log2_binom = [n](std::uint64_t i) {
        return (std::lgamma(double(n) + 1.0) - std::lgamma(double(i) + 1.0) -
                std::lgamma(double(n - i) + 1.0)) /
               std::log(2.0);
    };
    double max_term = 0.0;
    for (std::uint64_t i = 0; i <= top; ++i) max_term = std::max(max_term, log2_binom(i));
    double acc = 0.0;
    for (std::uint64_t i = 0; i <= top; ++i) acc += std::exp2(log2_binom(i) - max_term);
    return max_term + std::log2(acc);
}

std::int64_t ceil_int(double x) { return static_cast<std::int64_t>(std::ceil(x - 1e-9)); }

std::int64_t floor_int(double x) { return static_cast<std::int64_t>(std::floor(x + 1e-9)); }

}  // namespace streamcode
