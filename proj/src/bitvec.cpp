// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#include "streamcode/bitvec.hpp"

#include <algorithm>
#include <bit>

#include "streamcode/errors.hpp"

namespace streamcode {

namespace {

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

BitVector BitVector::from_bits(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            v.set(i);
        } else if (bits[i] != '0') {
            throw ParseError("bit string may contain only 0/1");
        }
    }
    return v;
}

BitVector BitVector::from_hex(std::string_view hex, std::size_t nbits) {
    const std::size_t nbytes = (nbits + 7) / 8;
    if (hex.size() != 2 * nbytes) {
        throw ParseError("hex payload has wrong length for " + std::to_string(nbits) + " bits");
    }
    BitVector v(nbits);
    for (std::size_t b = 0; b < nbytes; ++b) {
        const int hi = hex_digit(hex[2 * b]);
        const int lo = hex_digit(hex[2 * b + 1]);
        if (hi < 0 || lo < 0) throw ParseError("invalid hex digit in payload");
        const std::uint64_t byte = static_cast<std::uint64_t>(hi << 4 | lo);
        v.words_[b / 8] |= byte << ((b % 8) * 8);
    }
    // Padding bits beyond nbits must be zero.
    if ((nbits & 63) != 0 && !v.words_.empty() && (v.words_.back() >> (nbits & 63)) != 0) {
        throw ParseError("nonzero padding bits in hex payload");
    }
    return v;
}

BitVector BitVector::from_uint(std::uint64_t value, std::size_t nbits) {
    if (nbits > 64) throw DomainError("from_uint supports at most 64 bits");
    BitVector v(nbits);
    if (nbits > 0) {
        const std::uint64_t mask = nbits == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << nbits) - 1);
        if ((value & ~mask) != 0) throw DomainError("value does not fit in nbits");
        if (!v.words_.empty()) v.words_[0] = value & mask;
    }
    return v;
}

void BitVector::set(std::size_t i, bool v) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (v) {
        words_[i >> 6] |= mask;
    } else {
        words_[i >> 6] &= ~mask;
    }
}

void BitVector::push_back(bool bit) {
    if (size_ % 64 == 0) words_.push_back(0);
    if (bit) words_[size_ >> 6] |= std::uint64_t{1} << (size_ & 63);
    ++size_;
}

std::size_t BitVector::weight() const {
    std::size_t w = 0;
    for (std::uint64_t word : words_) w += std::popcount(word);
    return w;
}

std::size_t BitVector::prefix_weight(std::size_t n) const {
    if (n > size_) n = size_;
    std::size_t w = 0;
    const std::size_t full = n >> 6;
    for (std::size_t k = 0; k < full; ++k) w += std::popcount(words_[k]);
    if (n & 63) w += std::popcount(words_[full] & ((std::uint64_t{1} << (n & 63)) - 1));
    return w;
}

BitVector BitVector::prefix(std::size_t n) const {
    if (n > size_) throw DomainError("prefix length exceeds vector length");
    BitVector v(n);
    const std::size_t nwords = (n + 63) / 64;
    for (std::size_t k = 0; k < nwords; ++k) v.words_[k] = words_[k];
    if (n & 63) v.words_[nwords - 1] &= (std::uint64_t{1} << (n & 63)) - 1;
    return v;
}

void BitVector::xor_in(const BitVector& other) {
    if (other.size_ != size_) throw DomainError("xor_in requires equal lengths");
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= other.words_[k];
}

std::optional<std::size_t> BitVector::first_set() const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
        if (words_[k] != 0) return k * 64 + std::countr_zero(words_[k]);
    }
    return std::nullopt;
}

std::uint64_t BitVector::to_uint() const {
    if (size_ > 64) throw DomainError("to_uint supports at most 64 bits");
    return words_.empty() ? 0 : words_[0];
}

std::string BitVector::to_bits() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) {
        if (get(i)) s[i] = '1';
    }
    return s;
}

std::string BitVector::to_hex() const {
    static const char* digits = "0123456789abcdef";
    const std::size_t nbytes = (size_ + 7) / 8;
    std::string s(2 * nbytes, '0');
    for (std::size_t b = 0; b < nbytes; ++b) {
        const unsigned byte = (words_[b / 8] >> ((b % 8) * 8)) & 0xff;
        s[2 * b] = digits[byte >> 4];
        s[2 * b + 1] = digits[byte & 0xf];
    }
    return s;
}

bool BitVector::lex_less(const BitVector& a, const BitVector& b) {
    const std::size_t common_words = std::min(a.words_.size(), b.words_.size());
    for (std::size_t k = 0; k < common_words; ++k) {
        const std::uint64_t diff = a.words_[k] ^ b.words_[k];
        if (diff != 0) {
            // The lowest differing bit index is the earliest position; the
            // vector with a 0 there is lexicographically smaller.
            const int bit = std::countr_zero(diff);
            return ((a.words_[k] >> bit) & 1) == 0;
        }
    }
    // Common prefix equal: the shorter vector compares smaller.
    return a.size_ < b.size_;
}

BitVector operator^(const BitVector& a, const BitVector& b) {
    BitVector r = a;
    r.xor_in(b);
    return r;
}

std::size_t hamming_distance(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size()) {
        throw DomainError("hamming_distance requires equal lengths");
    }
    std::size_t w = 0;
    const auto wa = a.words(), wb = b.words();
    for (std::size_t k = 0; k < wa.size(); ++k) w += std::popcount(wa[k] ^ wb[k]);
    return w;
}

bool gf2_dot(const BitVector& a, const BitVector& b) {
    const auto wa = a.words(), wb = b.words();
    const std::size_t common = std::min(wa.size(), wb.size());
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < common; ++k) acc ^= wa[k] & wb[k];
    return std::popcount(acc) & 1;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows, BitVector(cols)) {}

BitMatrix BitMatrix::from_rows(std::vector<BitVector> rows) {
    BitMatrix m;
    m.rows_ = rows.size();
    m.cols_ = rows.empty() ? 0 : rows[0].size();
    for (const auto& r : rows) {
        if (r.size() != m.cols_) throw DomainError("matrix rows must have equal length");
    }
    m.data_ = std::move(rows);
    return m;
}

std::size_t rank_gf2(std::span<const BitVector> rows) {
    GF2Basis basis;
    std::size_t width = 0;
    for (const auto& r : rows) width = std::max(width, r.size());
    for (const auto& r : rows) {
        BitVector padded(width);
        for (std::size_t i = 0; i < r.size(); ++i) padded.set(i, r.get(i));
        basis.insert(std::move(padded));
    }
    return basis.rank();
}

std::size_t rank_gf2(const BitMatrix& m) { return rank_gf2(std::span(m.row_list())); }

bool GF2Basis::insert(BitVector row) {
    if (!rows_.empty() && row.size() != rows_[0].size()) {
        throw DomainError("GF2Basis rows must share one width");
    }
    auto pivot = row.first_set();
    // rows_ is kept sorted by pivot; after an xor the pivot only moves
    // right, so a single forward scan fully reduces the row.
    for (const auto& basis_row : rows_) {
        if (!pivot) return false;
        const std::size_t bp = *basis_row.first_set();
        if (bp < *pivot) continue;
        if (bp == *pivot) {
            row.xor_in(basis_row);
            pivot = row.first_set();
        }
    }
    if (!pivot) return false;
    rows_.push_back(std::move(row));
    std::sort(rows_.begin(), rows_.end(), [](const BitVector& a, const BitVector& b) {
        return *a.first_set() < *b.first_set();
    });
    return true;
}

}  // namespace streamcode
