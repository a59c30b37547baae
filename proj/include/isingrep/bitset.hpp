#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace isingrep {

/// Fixed-length packed bit vector, tagged so that edge configurations,
/// vertex source sets and spin configurations cannot be mixed up.
template <class Tag>
class BitSet {
 public:
  BitSet() = default;
  explicit BitSet(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

  static BitSet full(std::size_t n) {
    BitSet b(n);
    for (auto& w : b.words_) w = ~std::uint64_t{0};
    b.trim();
    return b;
  }

  static BitSet from_mask(std::size_t n, std::uint64_t mask) {
    if (n > 64) throw std::invalid_argument("from_mask: more than 64 bits");
    BitSet b(n);
    if (n > 0) b.words_[0] = mask;
    b.trim();
    return b;
  }

  template <class Range>
  static BitSet from_indices(std::size_t n, const Range& indices) {
    BitSet b(n);
    for (auto i : indices) b.set(static_cast<std::size_t>(i));
    return b;
  }

  std::size_t size() const noexcept { return size_; }

  bool test(std::size_t i) const {
    check(i);
    return (words_[i >> 6] >> (i & 63)) & 1U;
  }
  bool operator[](std::size_t i) const { return test(i); }

  void set(std::size_t i, bool value = true) {
    check(i);
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (value)
      words_[i >> 6] |= m;
    else
      words_[i >> 6] &= ~m;
  }
  void reset(std::size_t i) { set(i, false); }
  void flip(std::size_t i) {
    check(i);
    words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool none() const noexcept {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  bool any() const noexcept { return !none(); }

  BitSet& operator^=(const BitSet& o) {
    same(o);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= o.words_[k];
    return *this;
  }
  BitSet& operator|=(const BitSet& o) {
    same(o);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  BitSet& operator&=(const BitSet& o) {
    same(o);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  /// Removes the bits of o (set difference).
  BitSet& subtract(const BitSet& o) {
    same(o);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
    return *this;
  }
  friend BitSet operator^(BitSet a, const BitSet& b) { return a ^= b; }
  friend BitSet operator|(BitSet a, const BitSet& b) { return a |= b; }
  friend BitSet operator&(BitSet a, const BitSet& b) { return a &= b; }
  friend bool operator==(const BitSet&, const BitSet&) = default;

  bool is_subset_of(const BitSet& o) const {
    same(o);
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & ~o.words_[k]) return false;
    return true;
  }

  std::uint64_t to_mask() const {
    if (size_ > 64) throw std::invalid_argument("to_mask: more than 64 bits");
    return words_.empty() ? 0 : words_[0];
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  template <class F>
  void for_each_set(F&& f) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w) {
        const int t = std::countr_zero(w);
        f((k << 6) + static_cast<std::size_t>(t));
        w &= w - 1;
      }
    }
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for_each_set([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  /// Hex rendering of the integer sum_i bit_i 2^i, most significant digit
  /// first, zero-padded to ceil(size/4) digits.
  std::string to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    const std::size_t nd = (size_ + 3) / 4;
    std::string s(nd, '0');
    for (std::size_t d = 0; d < nd; ++d) {
      unsigned v = 0;
      for (std::size_t b = 0; b < 4; ++b) {
        const std::size_t i = 4 * d + b;
        if (i < size_ && test(i)) v |= 1U << b;
      }
      s[nd - 1 - d] = digits[v];
    }
    return s;
  }

  static BitSet from_hex(std::size_t n, std::string_view hex) {
    if (hex.size() != (n + 3) / 4) throw std::invalid_argument("from_hex: wrong digit count");
    BitSet b(n);
    const std::size_t nd = hex.size();
    for (std::size_t d = 0; d < nd; ++d) {
      const char c = hex[nd - 1 - d];
      unsigned v;
      if (c >= '0' && c <= '9')
        v = static_cast<unsigned>(c - '0');
      else if (c >= 'a' && c <= 'f')
        v = static_cast<unsigned>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F')
        v = static_cast<unsigned>(c - 'A' + 10);
      else
        throw std::invalid_argument("from_hex: bad digit");
      for (std::size_t bit = 0; bit < 4; ++bit) {
        if (!((v >> bit) & 1U)) continue;
        const std::size_t i = 4 * d + bit;
        if (i >= n) throw std::invalid_argument("from_hex: bit beyond size");
        b.set(i);
      }
    }
    return b;
  }

 private:
  void check(std::size_t i) const {
    if (i >= size_) throw std::out_of_range("BitSet index out of range");
  }
  void same(const BitSet& o) const {
    if (o.size_ != size_) throw std::invalid_argument("BitSet size mismatch");
  }
  void trim() {
    if (size_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct EdgeTag {};
struct VertexTag {};

/// One bit per edge index, 1 = open. Symmetric difference is the group law.
using EdgeConfig = BitSet<EdgeTag>;
/// One bit per vertex, 1 = odd degree.
using SourceSet = BitSet<VertexTag>;

}  // namespace isingrep
