#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "rzt/board.hpp"

namespace rzt {

/// Ordered crucial intersections: the key positions of the radix tree.
class Oci {
 public:
  Oci() = default;
  Oci(std::vector<Point> points, int side) : points_(std::move(points)) {
    BitBoard seen;
    for (Point p : points_) {
      if (p.index < 0 || p.index >= side * side) {
        throw std::invalid_argument("OCI intersection outside the board");
      }
      if (seen.test(p.index)) throw std::invalid_argument("duplicate OCI intersection");
      seen.set(p.index);
    }
  }

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  Point operator[](std::size_t d) const { return points_[d]; }
  const std::vector<Point>& points() const { return points_; }

  friend bool operator==(const Oci&, const Oci&) = default;

 private:
  std::vector<Point> points_;
};

/// Key length for a board: max(1, floor(fraction * side^2)).
inline std::size_t oci_length(double fraction, int side) {
  const double raw = std::floor(fraction * side * side + 1e-9);
  return static_cast<std::size_t>(std::max(1.0, raw));
}

/// The most frequent intersections by tally, ties broken by lower index.
inline Oci compute_oci(std::span<const std::uint64_t> tally, double fraction, int side) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("OCI fraction must be in (0, 1]");
  }
  const int area = side * side;
  std::vector<int> order(static_cast<std::size_t>(area));
  std::iota(order.begin(), order.end(), 0);
  auto count = [&](int i) {
    return static_cast<std::size_t>(i) < tally.size() ? tally[static_cast<std::size_t>(i)] : 0;
  };
  const std::size_t n = std::min(oci_length(fraction, side), order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                    [&](int a, int b) {
                      if (count(a) != count(b)) return count(a) > count(b);
                      return a < b;
                    });
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pts.push_back(Point{order[i]});
  return Oci(std::move(pts), side);
}

}  // namespace rzt
