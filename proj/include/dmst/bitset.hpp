#pragma once

#include <cstdint>
#include <vector>

namespace dmst {

// Fixed-universe bitset over edge indices. Symmetric difference, union and
// difference are word-parallel, which the set-heavy index code relies on.
class EdgeBitset {
 public:
  EdgeBitset() = default;
  explicit EdgeBitset(int universe) : bits_(universe), words_((universe + 63) / 64, 0) {}

  int universe() const { return bits_; }

  void set(int i) { words_[i >> 6] |= word(i); }
  void reset(int i) { words_[i >> 6] &= ~word(i); }
  bool test(int i) const { return (words_[i >> 6] & word(i)) != 0; }

  EdgeBitset& operator|=(const EdgeBitset& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
    return *this;
  }
  EdgeBitset& operator^=(const EdgeBitset& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    return *this;
  }
  EdgeBitset& operator&=(const EdgeBitset& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
    return *this;
  }
  // set difference: *this \ o
  EdgeBitset& subtract(const EdgeBitset& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~o.words_[w];
    return *this;
  }

  friend EdgeBitset operator^(EdgeBitset a, const EdgeBitset& b) { return a ^= b; }
  friend EdgeBitset operator|(EdgeBitset a, const EdgeBitset& b) { return a |= b; }
  friend EdgeBitset operator&(EdgeBitset a, const EdgeBitset& b) { return a &= b; }

  bool operator==(const EdgeBitset& o) const { return words_ == o.words_; }
  bool operator!=(const EdgeBitset& o) const { return words_ != o.words_; }

  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  int count() const {
    int c = 0;
    for (auto w : words_) c += __builtin_popcountll(w);
    return c;
  }

  void clear() {
    for (auto& w : words_) w = 0;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t x = words_[w];
      while (x) {
        int b = __builtin_ctzll(x);
        f(static_cast<int>(w * 64 + b));
        x &= x - 1;
      }
    }
  }

  std::vector<int> to_vector() const {
    std::vector<int> v;
    v.reserve(count());
    for_each([&](int i) { v.push_back(i); });
    return v;
  }

 private:
  static std::uint64_t word(int i) { return std::uint64_t{1} << (i & 63); }

  int bits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace dmst
