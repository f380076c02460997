#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace treecount {

// Fixed-width bit vector.
class Bits {
 public:
  Bits() = default;
  explicit Bits(int n) : n_(n), w_((n + 63) / 64, 0) {}

  int size() const { return n_; }
  bool test(int i) const { return w_[i >> 6] >> (i & 63) & 1; }
  void set(int i, bool on = true) {
    if (on) w_[i >> 6] |= std::uint64_t{1} << (i & 63);
    else w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  int count() const {
    int c = 0;
    for (auto w : w_) c += std::popcount(w);
    return c;
  }
  const std::vector<std::uint64_t>& words() const { return w_; }

  std::size_t hash() const {
    std::size_t h = static_cast<std::size_t>(n_);
    for (auto w : w_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

  // '0'/'1' per position.
  std::string to_string() const {
    std::string s(n_, '0');
    for (int i = 0; i < n_; ++i)
      if (test(i)) s[i] = '1';
    return s;
  }

  friend bool operator==(const Bits&, const Bits&) = default;
  friend auto operator<=>(const Bits& a, const Bits& b) { return a.w_ <=> b.w_; }

 private:
  int n_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace treecount

template <>
struct std::hash<treecount::Bits> {
  std::size_t operator()(const treecount::Bits& b) const noexcept { return b.hash(); }
};
