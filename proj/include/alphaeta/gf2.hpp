#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "alphaeta/numeric.hpp"

namespace alphaeta {

/// Fixed-length vector over GF(2).
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }

  bool get(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1ULL; }
  void set(std::size_t i, bool v) {
    if (v)
      words_[i / 64] |= 1ULL << (i % 64);
    else
      words_[i / 64] &= ~(1ULL << (i % 64));
  }
  void flip(std::size_t i) { words_[i / 64] ^= 1ULL << (i % 64); }

  BitVector& operator^=(const BitVector& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    return *this;
  }
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

  /// Inner product over GF(2).
  bool dot(const BitVector& o) const {
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & o.words_[w];
    return std::popcount(acc) & 1;
  }

  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }

  bool operator==(const BitVector&) const = default;

  /// Bits as a string, bit 0 first.
  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < size_; ++i) s.push_back(get(i) ? '1' : '0');
    return s;
  }

  static BitVector from_string(const std::string& bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      require(bits[i] == '0' || bits[i] == '1', "bit string: invalid character");
      v.set(i, bits[i] == '1');
    }
    return v;
  }

  static BitVector unit(std::size_t size, std::size_t i) {
    BitVector v(size);
    v.set(i, true);
    return v;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Linear system A s = b over GF(2) with A fixed and many right-hand sides.
/// The elimination of A is done once; each solve only transforms b.
class Gf2System {
 public:
  Gf2System(const std::vector<BitVector>& rows, std::size_t unknowns) : unknowns_(unknowns) {
    const std::size_t n_rows = rows.size();
    std::vector<BitVector> a = rows;
    combos_.reserve(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) {
      require(rows[i].size() == unknowns, "gf2 system: row width mismatch");
      combos_.push_back(BitVector::unit(n_rows, i));
    }
    std::size_t r = 0;
    for (std::size_t col = 0; col < unknowns && r < n_rows; ++col) {
      std::size_t p = r;
      while (p < n_rows && !a[p].get(col)) ++p;
      if (p == n_rows) continue;
      std::swap(a[p], a[r]);
      std::swap(combos_[p], combos_[r]);
      for (std::size_t i = 0; i < n_rows; ++i) {
        if (i != r && a[i].get(col)) {
          a[i] ^= a[r];
          combos_[i] ^= combos_[r];
        }
      }
      pivot_cols_.push_back(col);
      ++r;
    }
    rank_ = r;
  }

  std::size_t rank() const { return rank_; }
  bool full_rank() const { return rank_ == unknowns_; }

  /// Unique solution when A has full column rank and b is consistent.
  std::optional<BitVector> solve(const BitVector& rhs) const {
    require(full_rank(), "gf2 system: not full rank");
    for (std::size_t i = rank_; i < combos_.size(); ++i)
      if (combos_[i].dot(rhs)) return std::nullopt;
    BitVector s(unknowns_);
    for (std::size_t i = 0; i < rank_; ++i) s.set(pivot_cols_[i], combos_[i].dot(rhs));
    return s;
  }

 private:
  std::size_t unknowns_;
  std::size_t rank_ = 0;
  std::vector<std::size_t> pivot_cols_;
  std::vector<BitVector> combos_;
};

inline std::size_t gf2_rank(const std::vector<BitVector>& rows, std::size_t unknowns) {
  return Gf2System(rows, unknowns).rank();
}

}  // namespace alphaeta
