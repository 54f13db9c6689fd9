// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace streamcode {

/// Dense GF(2) vector, bit-packed into 64-bit words.
///
/// Bit i of the vector lives in words()[i / 64] at bit position i % 64.
/// Bits at indices >= size() are kept zero, so whole-word operations
/// (xor, popcount) never see garbage.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t n) : words_((n + 63) / 64, 0), size_(n) {}

    // "1011" -> bits 0,1,2,3 = 1,0,1,1
    static BitVector from_bits(std::string_view bits);
    // Hex encodes bytes in index order, bit b stored in byte b/8 at position b%8.
    static BitVector from_hex(std::string_view hex, std::size_t nbits);
    // Bit i = (value >> i) & 1. Requires nbits <= 64.
    static BitVector from_uint(std::uint64_t value, std::size_t nbits);

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(std::size_t i, bool v = true);
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
    void push_back(bool bit);

    std::size_t weight() const;
    // Weight of the first n bits.
    std::size_t prefix_weight(std::size_t n) const;
    BitVector prefix(std::size_t n) const;

    // Requires equal sizes.
    void xor_in(const BitVector& other);

    std::optional<std::size_t> first_set() const;

    // Requires size() <= 64; inverse of from_uint.
    std::uint64_t to_uint() const;

    std::string to_bits() const;
    std::string to_hex() const;

    std::span<const std::uint64_t> words() const { return words_; }

    friend bool operator==(const BitVector& a, const BitVector& b) = default;

    // Dictionary order on the bit string (index 0 is the most significant
    // position for comparison purposes).
    static bool lex_less(const BitVector& a, const BitVector& b);

private:
    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

BitVector operator^(const BitVector& a, const BitVector& b);

/// |{i : a[i] != b[i]}|. Throws DomainError on length mismatch.
std::size_t hamming_distance(const BitVector& a, const BitVector& b);

/// GF(2) inner product <a, b> over the overlap of the two vectors; the
/// shorter vector is implicitly zero-padded.
bool gf2_dot(const BitVector& a, const BitVector& b);

/// Dense GF(2) matrix stored as a list of equal-length rows.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);
    static BitMatrix from_rows(std::vector<BitVector> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool get(std::size_t r, std::size_t c) const { return data_[r].get(c); }
    void set(std::size_t r, std::size_t c, bool v = true) { data_[r].set(c, v); }
    const BitVector& row(std::size_t r) const { return data_[r]; }
    const std::vector<BitVector>& row_list() const { return data_; }

    friend bool operator==(const BitMatrix& a, const BitMatrix& b) = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<BitVector> data_;
};

/// GF(2) row rank via Gaussian elimination. Rows of different lengths are
/// implicitly zero-padded to the longest. Empty input has rank 0.
std::size_t rank_gf2(std::span<const BitVector> rows);
std::size_t rank_gf2(const BitMatrix& m);

/// Incremental row-echelon basis over GF(2); used for rank profiles.
class GF2Basis {
public:
    // Returns true if the row was independent of the basis so far.
    bool insert(BitVector row);
    std::size_t rank() const { return rows_.size(); }

private:
    std::vector<BitVector> rows_;  // echelon rows, each with a distinct pivot
};

}  // namespace streamcode
