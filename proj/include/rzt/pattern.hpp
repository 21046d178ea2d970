#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rzt/board.hpp"
#include "rzt/oci.hpp"
#include "rzt/zone.hpp"

namespace rzt {

/// Player to move, a zone, and the stones inside that zone.
///
/// Content outside the zone is never stored. `win_depth` is a payload for
/// the solver (plies needed by the proven win); matching ignores it.
struct ZonePattern {
  Color player = Color::Black;
  Zone zone;
  BitBoard black;  // subset of zone
  BitBoard white;  // subset of zone
  std::uint64_t stamp = 0;
  int win_depth = 0;

  int side() const { return zone.side(); }

  /// Content at a zone member.
  Color content(Point p) const {
    return black.test(p.index) ? Color::Black : white.test(p.index) ? Color::White : Color::Empty;
  }

  /// Triple equality (player, zone, content); stamp and payload excluded.
  bool same_pattern(const ZonePattern& o) const {
    return player == o.player && zone == o.zone && black == o.black && white == o.white;
  }
};

inline ZonePattern pattern_from(const Position& p, const Zone& z) {
  if (z.side() != p.side()) throw std::invalid_argument("zone and position sides differ");
  ZonePattern phi;
  phi.player = p.to_move();
  phi.zone = z;
  phi.black = p.black() & z.members();
  phi.white = p.white() & z.members();
  return phi;
}

inline bool matches(const Position& p, const ZonePattern& phi) {
  if (p.to_move() != phi.player) return false;
  const BitBoard diff = (p.black() ^ phi.black) | (p.white() ^ phi.white);
  return !diff.intersects(phi.zone.members());
}

/// Radix branch labels. The numeric values index child arrays.
enum class Symbol : std::uint8_t { B = 0, W = 1, E = 2, N = 3 };

inline constexpr char symbol_char(Symbol s) { return "BWEN"[static_cast<int>(s)]; }

inline Symbol symbol_of(Color c) {
  return c == Color::Black ? Symbol::B : c == Color::White ? Symbol::W : Symbol::E;
}

using PatternKey = std::vector<Symbol>;

inline std::string to_string(const PatternKey& key) {
  std::string s;
  s.reserve(key.size());
  for (Symbol sym : key) s += symbol_char(sym);
  return s;
}

inline Symbol pattern_symbol(const ZonePattern& phi, Point at) {
  if (!phi.zone.contains(at)) return Symbol::N;
  return symbol_of(phi.content(at));
}

inline PatternKey encode_pattern_key(const ZonePattern& phi, const Oci& oci) {
  PatternKey key;
  key.reserve(oci.size());
  for (Point at : oci.points()) key.push_back(pattern_symbol(phi, at));
  return key;
}

inline PatternKey encode_position_key(const Position& p, const Oci& oci) {
  PatternKey key;
  key.reserve(oci.size());
  for (Point at : oci.points()) key.push_back(symbol_of(p.at(at)));
  return key;
}

}  // namespace rzt
