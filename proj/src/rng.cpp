// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#include "streamcode/rng.hpp"

#include "streamcode/errors.hpp"

namespace streamcode {

std::uint64_t SeededRandomSource::next_word() {
    bits_available_ = 0;
    std::uint64_t z = seed_ + (++counter_) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

bool SeededRandomSource::next_bit() {
    if (bits_available_ == 0) {
        buffer_ = next_word();
        bits_available_ = 64;
    }
    const bool bit = buffer_ & 1;
    buffer_ >>= 1;
    --bits_available_;
    return bit;
}

BitVector SeededRandomSource::next_bits(std::size_t n) {
    BitVector v(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (next_bit()) v.set(i);
    }
    return v;
}

std::uint64_t SeededRandomSource::next_below(std::uint64_t m) {
    if (m == 0) throw DomainError("next_below requires m >= 1");
    if (m == 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % m);
    for (;;) {
        const std::uint64_t w = next_word();
        if (w < limit) return w % m;
    }
}

double SeededRandomSource::next_unit() {
    return static_cast<double>(next_word() >> 11) * 0x1.0p-53;
}

}  // namespace streamcode
