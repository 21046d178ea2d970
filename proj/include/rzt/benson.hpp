#pragma once

#include <vector>

#include "rzt/board.hpp"
#include "rzt/zone.hpp"

namespace rzt {

struct SafeBlocks {
  std::vector<Block> blocks;
  /// Stones of the safe blocks plus every intersection of their vital regions.
  Zone zone;
};

/// Benson's unconditional-life test for `player`.
///
/// Regions are the connected components of intersections not holding a
/// `player` stone. A region is vital to a block when it contains at least one
/// empty point and every empty point in it is a liberty of that block. The
/// usual pruning fixpoint then drops blocks with fewer than two vital regions
/// and regions bordered by a dropped block.
inline SafeBlocks benson_safe_zone(const Position& p, Color player) {
  const Geometry& g = geometry(p.side());
  SafeBlocks result{{}, Zone(p.side())};

  std::vector<Block> chains = blocks_of(p, player);
  if (chains.empty()) return result;

  const BitBoard own = p.stones(player);
  const BitBoard open = p.empty();

  struct Region {
    BitBoard points;
    BitBoard border;  // adjacent `player` stones
    bool alive = true;
  };
  std::vector<Region> regions;
  BitBoard rest = g.board - own;
  while (rest.any()) {
    Region r;
    r.points = g.flood(BitBoard::single(rest.lowest()), g.board - own);
    r.border = g.neighbours(r.points) & own;
    rest = rest - r.points;
    regions.push_back(r);
  }

  const std::size_t nb = chains.size();
  // vital[r][b]
  std::vector<std::vector<bool>> vital(regions.size(), std::vector<bool>(nb, false));
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const BitBoard empties = regions[r].points & open;
    if (empties.none()) continue;
    for (std::size_t b = 0; b < nb; ++b) {
      vital[r][b] = empties.is_subset_of(chains[b].liberties);
    }
  }

  std::vector<bool> block_alive(nb, true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t b = 0; b < nb; ++b) {
      if (!block_alive[b]) continue;
      int count = 0;
      for (std::size_t r = 0; r < regions.size(); ++r) {
        if (regions[r].alive && vital[r][b]) ++count;
      }
      if (count < 2) {
        block_alive[b] = false;
        changed = true;
      }
    }
    for (auto& region : regions) {
      if (!region.alive) continue;
      for (std::size_t b = 0; b < nb; ++b) {
        if (!block_alive[b] && region.border.intersects(chains[b].stones)) {
          region.alive = false;
          changed = true;
          break;
        }
      }
    }
  }

  BitBoard zone;
  for (std::size_t b = 0; b < nb; ++b) {
    if (!block_alive[b]) continue;
    result.blocks.push_back(chains[b]);
    zone |= chains[b].stones;
    for (std::size_t r = 0; r < regions.size(); ++r) {
      if (regions[r].alive && vital[r][b]) zone |= regions[r].points;
    }
  }
  result.zone = Zone(p.side(), zone);
  return result;
}

}  // namespace rzt
