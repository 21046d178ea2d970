#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace rzt {

inline constexpr int kMaxSide = 9;
inline constexpr int kMaxArea = kMaxSide * kMaxSide;

/// Set of board intersections packed into two machine words.
///
/// Bit i stands for intersection index i. Index 64..80 live in the high word,
/// so any board up to 9x9 fits. Shifts never consult the board geometry; the
/// caller masks the result (see Geometry).
class BitBoard {
 public:
  constexpr BitBoard() = default;
  constexpr BitBoard(std::uint64_t lo, std::uint64_t hi) : lo_(lo), hi_(hi) {}

  static constexpr BitBoard single(int index) {
    BitBoard b;
    b.set(index);
    return b;
  }

  /// All indices in [0, n).
  static constexpr BitBoard first_n(int n) {
    if (n <= 0) return {};
    if (n < 64) return {(std::uint64_t{1} << n) - 1, 0};
    if (n == 64) return {~std::uint64_t{0}, 0};
    return {~std::uint64_t{0}, (std::uint64_t{1} << (n - 64)) - 1};
  }

  constexpr bool test(int i) const {
    return i < 64 ? (lo_ >> i) & 1U : (hi_ >> (i - 64)) & 1U;
  }
  constexpr void set(int i) {
    if (i < 64) {
      lo_ |= std::uint64_t{1} << i;
    } else {
      hi_ |= std::uint64_t{1} << (i - 64);
    }
  }
  constexpr void reset(int i) {
    if (i < 64) {
      lo_ &= ~(std::uint64_t{1} << i);
    } else {
      hi_ &= ~(std::uint64_t{1} << (i - 64));
    }
  }

  constexpr int count() const { return std::popcount(lo_) + std::popcount(hi_); }
  constexpr bool any() const { return (lo_ | hi_) != 0; }
  constexpr bool none() const { return !any(); }

  /// Lowest set index, or -1 when empty.
  constexpr int lowest() const {
    if (lo_ != 0) return std::countr_zero(lo_);
    if (hi_ != 0) return 64 + std::countr_zero(hi_);
    return -1;
  }

  constexpr bool is_subset_of(const BitBoard& o) const {
    return (lo_ & ~o.lo_) == 0 && (hi_ & ~o.hi_) == 0;
  }
  constexpr bool intersects(const BitBoard& o) const {
    return ((lo_ & o.lo_) | (hi_ & o.hi_)) != 0;
  }

  constexpr BitBoard operator|(const BitBoard& o) const { return {lo_ | o.lo_, hi_ | o.hi_}; }
  constexpr BitBoard operator&(const BitBoard& o) const { return {lo_ & o.lo_, hi_ & o.hi_}; }
  constexpr BitBoard operator^(const BitBoard& o) const { return {lo_ ^ o.lo_, hi_ ^ o.hi_}; }
  constexpr BitBoard operator~() const { return {~lo_, ~hi_}; }
  constexpr BitBoard& operator|=(const BitBoard& o) { return *this = *this | o; }
  constexpr BitBoard& operator&=(const BitBoard& o) { return *this = *this & o; }
  constexpr BitBoard& operator^=(const BitBoard& o) { return *this = *this ^ o; }
  /// Set difference.
  constexpr BitBoard operator-(const BitBoard& o) const { return {lo_ & ~o.lo_, hi_ & ~o.hi_}; }

  constexpr BitBoard shl(int k) const {
    if (k == 0) return *this;
    if (k >= 64) return {0, lo_ << (k - 64)};
    return {lo_ << k, (hi_ << k) | (lo_ >> (64 - k))};
  }
  constexpr BitBoard shr(int k) const {
    if (k == 0) return *this;
    if (k >= 64) return {hi_ >> (k - 64), 0};
    return {(lo_ >> k) | (hi_ << (64 - k)), hi_ >> k};
  }

  /// Calls f(index) for every member in ascending order.
  template <typename F>
  constexpr void for_each(F&& f) const {
    for (std::uint64_t w = lo_; w != 0; w &= w - 1) f(std::countr_zero(w));
    for (std::uint64_t w = hi_; w != 0; w &= w - 1) f(64 + std::countr_zero(w));
  }

  constexpr std::uint64_t lo() const { return lo_; }
  constexpr std::uint64_t hi() const { return hi_; }

  friend constexpr bool operator==(const BitBoard&, const BitBoard&) = default;
  friend constexpr auto operator<=>(const BitBoard&, const BitBoard&) = default;

 private:
  std::uint64_t lo_ = 0;
  std::uint64_t hi_ = 0;
};

/// Row-major layout with row 0 at the bottom: index = row * side + col.
struct Geometry {
  int side = 0;
  BitBoard board;
  BitBoard not_first_col;
  BitBoard not_last_col;

  /// b together with its 4-neighbours, clipped to the board.
  constexpr BitBoard dilate(const BitBoard& b) const {
    BitBoard r = b | (b.shl(1) & not_first_col) | (b.shr(1) & not_last_col) | b.shl(side) |
                 b.shr(side);
    return r & board;
  }
  constexpr BitBoard neighbours(const BitBoard& b) const { return dilate(b) - b; }

  /// Connected component of `within` that contains `seed`.
  constexpr BitBoard flood(const BitBoard& seed, const BitBoard& within) const {
    BitBoard cur = seed & within;
    while (true) {
      BitBoard next = dilate(cur) & within;
      if (next == cur) return cur;
      cur = next;
    }
  }
};

namespace detail {

constexpr Geometry make_geometry(int side) {
  Geometry g;
  g.side = side;
  g.board = BitBoard::first_n(side * side);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      if (c > 0) g.not_first_col.set(r * side + c);
      if (c < side - 1) g.not_last_col.set(r * side + c);
    }
  }
  return g;
}

inline constexpr std::array<Geometry, kMaxSide + 1> kGeometries = [] {
  std::array<Geometry, kMaxSide + 1> all{};
  for (int s = 1; s <= kMaxSide; ++s) all[static_cast<std::size_t>(s)] = make_geometry(s);
  return all;
}();

}  // namespace detail

inline const Geometry& geometry(int side) {
  return detail::kGeometries[static_cast<std::size_t>(side)];
}

}  // namespace rzt

template <>
struct std::hash<rzt::BitBoard> {
  std::size_t operator()(const rzt::BitBoard& b) const noexcept {
    std::uint64_t h = b.lo() * 0x9E3779B97F4A7C15ULL;
    h ^= (b.hi() + 0x632BE59BD9B4E019ULL) * 0xC2B2AE3D27D4EB4FULL;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};
