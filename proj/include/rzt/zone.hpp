#pragma once

#include <stdexcept>
#include <vector>

#include "rzt/bitboard.hpp"
#include "rzt/board.hpp"

namespace rzt {

/// A set of intersections on a board of known side.
class Zone {
 public:
  Zone() = default;
  explicit Zone(int side, BitBoard members = {}) : side_(side), members_(members) {
    if ((members & ~geometry(side).board).any()) {
      throw std::invalid_argument("zone member outside the board");
    }
  }

  static Zone full(int side) { return Zone(side, geometry(side).board); }

  int side() const { return side_; }
  const BitBoard& members() const { return members_; }
  int size() const { return members_.count(); }
  bool empty() const { return members_.none(); }
  bool contains(Point p) const { return members_.test(p.index); }
  bool contains(int index) const { return members_.test(index); }

  void add(Point p) { members_.set(p.index); }
  void add(const BitBoard& b) { members_ |= b & geometry(side_).board; }

  Zone united(const Zone& o) const { return Zone(side_, members_ | o.members_); }
  bool is_subset_of(const Zone& o) const { return members_.is_subset_of(o.members_); }

  std::vector<Point> points() const {
    std::vector<Point> out;
    members_.for_each([&](int i) { out.push_back(Point{i}); });
    return out;
  }

  friend bool operator==(const Zone&, const Zone&) = default;

 private:
  int side_ = 0;
  BitBoard members_;
};

}  // namespace rzt
