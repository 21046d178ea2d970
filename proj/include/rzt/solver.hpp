#pragma once

#include <algorithm>
#include <climits>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "rzt/benson.hpp"
#include "rzt/board.hpp"
#include "rzt/pattern.hpp"
#include "rzt/table.hpp"
#include "rzt/zone.hpp"

namespace rzt {

enum class Outcome { Win, Unknown };

inline const char* to_string(Outcome o) { return o == Outcome::Win ? "win" : "unknown"; }

/// The OR player wins once any of its blocks is unconditionally alive.
struct Goal {
  Color or_player = Color::White;
};

enum class TableUse { None, ExactTT, ExactTTWithRzt };

struct SolveConfig {
  int max_depth = 10;
  std::uint64_t max_nodes = 1'000'000;
  TableUse tables = TableUse::ExactTTWithRzt;
  TableMode structure = TableMode::Radix;
  bool timestamps = true;
  MatchPolicy match = MatchPolicy::First;
  ReconstructionConfig rebuild;
};

inline PatternTable make_table(int side, const SolveConfig& cfg) {
  return PatternTable(side, cfg.structure, cfg.timestamps, cfg.rebuild, cfg.match);
}

struct SolveResult {
  Outcome outcome = Outcome::Unknown;
  Zone zone;
  /// Plies the proven win needs; meaningful only for Win.
  int win_depth = 0;
  std::uint64_t nodes = 0;
  bool budget_exhausted = false;
  TableStats table_stats;
};

// Zone dilation.
//
// A relevance zone Z for a won position p must keep the win for every p*
// that agrees with p on Z. The helpers below add just enough context around
// a move that replaying it in any such p* has the same legality and removes
// the same stones inside Z.

/// Picks a liberty already in `zone` when there is one.
inline int pick_liberty(const BitBoard& libs, const BitBoard& zone) {
  const BitBoard inside = libs & zone;
  return inside.any() ? inside.lowest() : libs.lowest();
}

/// Context that pins down the effect of the legal move m (p.to_move() plays).
/// Liberties are preferably taken from `zone`.
inline BitBoard move_footprint(const Position& p, int m, const Played& played,
                               const BitBoard& zone = {}) {
  const Geometry& g = geometry(p.side());
  const Color mover = p.to_move();
  const Color them = opponent(mover);
  const Position& after = played.position;
  const BitBoard here = BitBoard::single(m);

  BitBoard fp = here;
  const BitBoard own = g.flood(here, after.stones(mover));
  fp |= own | (g.neighbours(own) & after.empty());
  // Captured blocks with their whole border, so they are captured again.
  fp |= played.captured | g.neighbours(played.captured);
  // Opponent blocks next to m that survive keep one liberty inside the zone.
  BitBoard seen = played.captured;
  (g.neighbours(here) & p.stones(them)).for_each([&](int n) {
    if (seen.test(n)) return;
    Block b = block_at(p, n);
    seen |= b.stones;
    fp |= b.stones;
    const BitBoard libs = g.neighbours(b.stones) & after.empty();
    if (libs.any()) fp.set(pick_liberty(libs, zone | fp));
  });
  return fp;
}

/// Context that keeps the empty point m illegal (suicide) for p.to_move().
inline BitBoard illegal_footprint(const Position& p, int m, const BitBoard& zone = {}) {
  const Geometry& g = geometry(p.side());
  const Color mover = p.to_move();
  const BitBoard here = BitBoard::single(m);
  BitBoard fp = g.dilate(here);
  BitBoard seen;
  (g.neighbours(here) & p.occupied()).for_each([&](int n) {
    if (seen.test(n)) return;
    Block b = block_at(p, n);
    seen |= b.stones;
    if (b.color == mover) {
      fp |= b.stones | g.neighbours(b.stones);
    } else {
      fp |= b.stones;
      const BitBoard libs = b.liberties - here;
      if (libs.any()) fp.set(pick_liberty(libs, zone | fp));
    }
  });
  return fp;
}

/// Every `owner` block touching the zone is pulled in whole together with a
/// liberty, so no move outside the zone can capture stones inside it.
inline BitBoard close_zone(const Position& p, BitBoard zone, Color owner) {
  for (const Block& b : blocks_of(p, owner)) {
    if (!b.stones.intersects(zone)) continue;
    zone |= b.stones;
    if (!b.liberties.intersects(zone)) zone.set(b.liberties.lowest());
  }
  return zone;
}

/// Zone for an OR node won by playing m into a child won with child_zone.
inline Zone rz_for_or_win(const Position& p, Move m, const Zone& child_zone) {
  if (m.is_pass()) return child_zone;
  auto played = try_play(p, m);
  if (!played) throw IllegalMove("rz_for_or_win: illegal move " + to_string(m, p.side()));
  return Zone(p.side(),
              child_zone.members() | move_footprint(p, m.index(), *played, child_zone.members()));
}

/// Result of one in-zone refutation: nullopt means the reply was not refuted.
struct Refutation {
  Zone zone;
  int depth = 0;
};

/// In-zone refutation fixpoint for an AND node whose pass child is won with
/// pass_zone. `refute(child)` solves the child after an AND move. Returns the
/// final zone and the deepest refutation, or nullopt when some in-zone reply
/// is not refuted.
template <typename Refute>
std::optional<std::pair<Zone, int>> rz_for_and_win(const Position& p, const Zone& pass_zone,
                                                   int pass_depth, Color or_player,
                                                   Refute&& refute) {
  BitBoard zone = close_zone(p, pass_zone.members(), or_player);
  int depth = pass_depth;
  BitBoard handled;
  while (true) {
    const BitBoard todo = (zone & p.empty()) - handled;
    if (todo.none()) break;
    const int m = todo.lowest();
    handled.set(m);
    auto played = try_play(p, Move::at(m));
    if (!played) {
      zone |= illegal_footprint(p, m, zone);
    } else {
      std::optional<Refutation> r = refute(played->position);
      if (!r) return std::nullopt;
      zone |= r->zone.members();
      zone |= move_footprint(p, m, *played, zone);
      depth = std::max(depth, r->depth);
    }
    zone = close_zone(p, zone, or_player);
  }
  return std::make_pair(Zone(p.side(), zone), depth);
}

/// Depth-first AND-OR search producing relevance zones, with an exact
/// transposition table and an optional zone-pattern table.
class Solver {
 public:
  Solver(Goal goal, SolveConfig cfg, PatternTable* table)
      : goal_(goal), cfg_(cfg), table_(table) {
    if (cfg_.max_depth < 0) throw std::invalid_argument("max_depth must be non-negative");
    if (cfg_.max_nodes == 0) throw std::invalid_argument("max_nodes must be positive");
    if (cfg_.tables == TableUse::ExactTTWithRzt && table_ == nullptr) {
      throw std::invalid_argument("pattern table required");
    }
  }

  SolveResult run(const Position& root) {
    if (!root.is_legal()) throw IllegalMove("root position has a block without liberties");
    if (table_ != nullptr && table_->side() != root.side()) {
      throw std::invalid_argument("table side does not match position");
    }
    Proof proof = search(root, cfg_.max_depth);
    SolveResult r;
    r.nodes = nodes_;
    r.budget_exhausted = aborted_;
    if (!aborted_ && proof.win) {
      r.outcome = Outcome::Win;
      r.zone = proof.zone;
      r.win_depth = proof.depth;
    } else {
      r.zone = Zone(root.side());
    }
    if (table_ != nullptr) r.table_stats = table_->stats();
    return r;
  }

 private:
  struct Proof {
    bool win = false;
    Zone zone;
    int depth = 0;
  };

  struct TTEntry {
    int unknown_depth = -1;  // not winnable within this many plies
    int win_depth = INT_MAX;
    Zone zone;
  };

  bool use_tt() const { return cfg_.tables != TableUse::None; }
  bool use_rzt() const { return cfg_.tables == TableUse::ExactTTWithRzt; }

  Proof record_win(const Position& p, Zone zone, int depth) {
    if (use_tt()) {
      TTEntry& e = tt_[p];
      if (depth < e.win_depth) {
        e.win_depth = depth;
        e.zone = zone;
      }
    }
    if (use_rzt()) {
      ZonePattern phi = pattern_from(p, zone);
      phi.win_depth = depth;
      table_->insert(std::move(phi));
    }
    return {true, std::move(zone), depth};
  }

  /// Table-only proof attempt: exact win, then zone pattern.
  std::optional<Proof> probe_win(const Position& p, int remaining) {
    if (use_tt()) {
      auto it = tt_.find(p);
      if (it != tt_.end() && it->second.win_depth <= remaining) {
        return Proof{true, it->second.zone, it->second.win_depth};
      }
    }
    if (use_rzt()) {
      auto& stamps = stamps_[p];
      if (stamps.size() <= static_cast<std::size_t>(remaining)) {
        stamps.resize(static_cast<std::size_t>(remaining) + 1);
      }
      const ZonePattern* hit =
          table_->lookup(p, stamps[static_cast<std::size_t>(remaining)],
                         [remaining](const ZonePattern& phi) { return phi.win_depth <= remaining; });
      if (hit != nullptr) {
        Proof proof{true, hit->zone, hit->win_depth};
        TTEntry& e = tt_[p];
        if (proof.depth < e.win_depth) {
          e.win_depth = proof.depth;
          e.zone = proof.zone;
        }
        return proof;
      }
    }
    return std::nullopt;
  }

  Proof search(const Position& p, int remaining) {
    if (aborted_) return {};
    if (++nodes_ > cfg_.max_nodes) {
      aborted_ = true;
      return {};
    }
    if (use_tt()) {
      auto it = tt_.find(p);
      if (it != tt_.end() && it->second.win_depth <= remaining) {
        return {true, it->second.zone, it->second.win_depth};
      }
    }
    SafeBlocks safe = benson_safe_zone(p, goal_.or_player);
    if (!safe.blocks.empty()) return record_win(p, safe.zone, 0);
    if (remaining == 0) return {};
    if (use_tt()) {
      auto it = tt_.find(p);
      if (it != tt_.end() && it->second.unknown_depth >= remaining) return {};
    }
    if (use_rzt()) {
      if (auto hit = probe_win(p, remaining)) return *hit;
    }

    Proof res = p.to_move() == goal_.or_player ? or_node(p, remaining) : and_node(p, remaining);
    if (aborted_) return {};
    if (res.win) return record_win(p, std::move(res.zone), res.depth);
    if (use_tt()) {
      TTEntry& e = tt_[p];
      e.unknown_depth = std::max(e.unknown_depth, remaining);
    }
    return {};
  }

  Proof or_node(const Position& p, int remaining) {
    const std::vector<Move> moves = legal_moves(p);
    if (use_tt()) {
      for (Move m : moves) {
        auto played = try_play(p, m);
        if (auto child = probe_win(played->position, remaining - 1)) {
          return {true, rz_for_or_win(p, m, child->zone), child->depth + 1};
        }
      }
    }
    for (Move m : moves) {
      auto played = try_play(p, m);
      Proof child = search(played->position, remaining - 1);
      if (aborted_) return {};
      if (child.win) return {true, rz_for_or_win(p, m, child.zone), child.depth + 1};
    }
    return {};
  }

  Proof and_node(const Position& p, int remaining) {
    Proof pass = search(p.with_to_move(goal_.or_player), remaining - 1);
    if (!pass.win) return {};
    auto fixed = rz_for_and_win(
        p, pass.zone, pass.depth + 1, goal_.or_player,
        [&](const Position& child) -> std::optional<Refutation> {
          Proof r = search(child, remaining - 1);
          if (!r.win) return std::nullopt;
          return Refutation{r.zone, r.depth + 1};
        });
    if (!fixed) return {};
    return {true, std::move(fixed->first), fixed->second};
  }

  Goal goal_;
  SolveConfig cfg_;
  PatternTable* table_;
  std::unordered_map<Position, TTEntry> tt_;
  std::unordered_map<Position, std::vector<SearchStamp>> stamps_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
};

/// Solves p for `goal`. With ExactTTWithRzt and no table given, a private
/// table built from cfg is used.
inline SolveResult solve(const Position& p, Goal goal, const SolveConfig& cfg,
                         PatternTable* table = nullptr) {
  std::optional<PatternTable> own;
  if (cfg.tables == TableUse::ExactTTWithRzt && table == nullptr) {
    own.emplace(make_table(p.side(), cfg));
    table = &*own;
  }
  return Solver(goal, cfg, cfg.tables == TableUse::ExactTTWithRzt ? table : nullptr).run(p);
}

/// Exhaustive AND-OR search with an exact-position memo; no zones, no
/// pattern table. The independent oracle for the zone solver.
class BruteForce {
 public:
  explicit BruteForce(Goal goal) : goal_(goal) {}

  Outcome solve(const Position& p, int max_depth) {
    return win(p, max_depth) ? Outcome::Win : Outcome::Unknown;
  }

  std::size_t memo_size() const { return memo_.size(); }

 private:
  struct Bounds {
    int max_fail = -1;
    int min_win = INT_MAX;
  };

  bool win(const Position& p, int remaining) {
    Bounds& b0 = memo_[p];
    if (remaining >= b0.min_win) return true;
    if (remaining <= b0.max_fail) return false;

    bool result = false;
    if (!benson_safe_zone(p, goal_.or_player).blocks.empty()) {
      result = true;
      remaining = 0;
    } else if (remaining > 0) {
      const bool or_turn = p.to_move() == goal_.or_player;
      result = !or_turn;
      for (Move m : legal_moves(p)) {
        const bool child = win(try_play(p, m)->position, remaining - 1);
        if (or_turn && child) {
          result = true;
          break;
        }
        if (!or_turn && !child) {
          result = false;
          break;
        }
      }
    }
    Bounds& b = memo_[p];  // rehash-safe
    if (result) {
      b.min_win = std::min(b.min_win, remaining);
    } else {
      b.max_fail = std::max(b.max_fail, remaining);
    }
    return result;
  }

  Goal goal_;
  std::unordered_map<Position, Bounds> memo_;
};

inline Outcome brute_force_solve(const Position& p, Goal goal, int max_depth) {
  return BruteForce(goal).solve(p, max_depth);
}

enum class VerifyStatus { Verified, Counterexample, BudgetExceeded };

inline const char* to_string(VerifyStatus s) {
  switch (s) {
    case VerifyStatus::Verified: return "verified";
    case VerifyStatus::Counterexample: return "counterexample";
    case VerifyStatus::BudgetExceeded: return "budget_exceeded";
  }
  return "?";
}

struct VerifyResult {
  VerifyStatus status = VerifyStatus::Verified;
  std::optional<Position> counterexample;
  std::uint64_t checked = 0;
};

/// Checks the relevance-zone property of phi by brute force: every legal
/// completion of the intersections outside the zone, with phi.player to
/// move, must be a win within max_depth plies. `oracle` may be shared across
/// calls to reuse its memo.
inline VerifyResult verify_rzp(const ZonePattern& phi, int side, Goal goal, int max_depth,
                               std::uint64_t budget, BruteForce* oracle = nullptr) {
  if (phi.side() != side) throw std::invalid_argument("pattern side mismatch");
  std::optional<BruteForce> own;
  if (oracle == nullptr) oracle = &own.emplace(goal);

  const std::vector<Point> outside = Zone(side, geometry(side).board - phi.zone.members()).points();
  std::vector<std::uint8_t> digit(outside.size(), 0);
  Position base = Position::unchecked(side, phi.black, phi.white, phi.player);

  VerifyResult result;
  while (true) {
    Position cand = base;
    for (std::size_t i = 0; i < outside.size(); ++i) {
      cand.put(outside[i].index, static_cast<Color>(digit[i]));
    }
    if (cand.is_legal()) {
      if (result.checked == budget) {
        result.status = VerifyStatus::BudgetExceeded;
        return result;
      }
      ++result.checked;
      if (oracle->solve(cand, max_depth) != Outcome::Win) {
        result.status = VerifyStatus::Counterexample;
        result.counterexample = cand;
        return result;
      }
    }
    std::size_t i = 0;
    while (i < digit.size() && digit[i] == 2) digit[i++] = 0;
    if (i == digit.size()) break;
    ++digit[i];
  }
  return result;
}

}  // namespace rzt
