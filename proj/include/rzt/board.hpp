#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rzt/bitboard.hpp"

namespace rzt {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IllegalMove : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Color : std::uint8_t { Empty, Black, White };

constexpr Color opponent(Color c) {
  return c == Color::Black ? Color::White : c == Color::White ? Color::Black : Color::Empty;
}

/// Single-letter form used by problem files: B / W / E.
constexpr char color_letter(Color c) {
  return c == Color::Black ? 'B' : c == Color::White ? 'W' : 'E';
}

inline Color color_from_letter(std::string_view s) {
  if (s == "B") return Color::Black;
  if (s == "W") return Color::White;
  if (s == "E") return Color::Empty;
  throw ParseError("bad color '" + std::string(s) + "'");
}

struct Point {
  int index = 0;
  friend constexpr auto operator<=>(Point, Point) = default;
};

inline constexpr std::string_view kColumnLetters = "ABCDEFGHJKLMNOPQRST";

/// "E2" style rendering: column letter (I skipped) then 1-based row from the bottom.
inline std::string to_coord(Point p, int side) {
  std::string s(1, kColumnLetters[static_cast<std::size_t>(p.index % side)]);
  s += std::to_string(p.index / side + 1);
  return s;
}

inline Point parse_coord(std::string_view s, int side) {
  if (s.size() < 2) throw ParseError("bad coordinate '" + std::string(s) + "'");
  char letter = s[0];
  if (letter >= 'a' && letter <= 'z') letter = static_cast<char>(letter - 'a' + 'A');
  auto col = kColumnLetters.find(letter);
  int row = 0;
  for (char ch : s.substr(1)) {
    if (ch < '0' || ch > '9') throw ParseError("bad coordinate '" + std::string(s) + "'");
    row = row * 10 + (ch - '0');
  }
  if (col == std::string_view::npos || static_cast<int>(col) >= side || row < 1 || row > side) {
    throw ParseError("coordinate '" + std::string(s) + "' is off the board");
  }
  return Point{(row - 1) * side + static_cast<int>(col)};
}

/// A stone placement or a pass.
class Move {
 public:
  static constexpr Move pass() { return Move(-1); }
  static constexpr Move at(Point p) { return Move(p.index); }
  static constexpr Move at(int index) { return Move(index); }

  constexpr bool is_pass() const { return index_ < 0; }
  constexpr Point point() const { return Point{index_}; }
  constexpr int index() const { return index_; }

  friend constexpr bool operator==(Move, Move) = default;

 private:
  constexpr explicit Move(int index) : index_(index) {}
  int index_;
};

inline std::string to_string(Move m, int side) {
  return m.is_pass() ? std::string("pass") : to_coord(m.point(), side);
}

/// Board contents plus the player to move.
///
/// Legal positions have no zero-liberty block. `from_cells` and the parser
/// enforce that; `unchecked` exists for synthetic pattern workloads where
/// only the cell contents matter.
class Position {
 public:
  Position() = default;

  Position(int side, Color to_move) : side_(side), to_move_(to_move) {
    if (side < 1 || side > kMaxSide) {
      throw std::invalid_argument("board side must be in [1, " + std::to_string(kMaxSide) + "]");
    }
    if (to_move == Color::Empty) throw std::invalid_argument("to_move must be Black or White");
  }

  static Position unchecked(int side, BitBoard black, BitBoard white, Color to_move) {
    Position p(side, to_move);
    p.black_ = black & geometry(side).board;
    p.white_ = (white & geometry(side).board) - p.black_;
    return p;
  }

  static Position from_cells(int side, const std::vector<Color>& cells, Color to_move);

  int side() const { return side_; }
  int area() const { return side_ * side_; }
  Color to_move() const { return to_move_; }

  Color at(int index) const {
    return black_.test(index) ? Color::Black : white_.test(index) ? Color::White : Color::Empty;
  }
  Color at(Point p) const { return at(p.index); }

  const BitBoard& black() const { return black_; }
  const BitBoard& white() const { return white_; }
  const BitBoard& stones(Color c) const { return c == Color::Black ? black_ : white_; }
  BitBoard occupied() const { return black_ | white_; }
  BitBoard empty() const { return geometry(side_).board - occupied(); }

  Position with_to_move(Color c) const {
    Position p = *this;
    p.to_move_ = c;
    return p;
  }

  /// Writes a stone (or clears the cell) without any rule processing.
  void put(int index, Color c) {
    black_.reset(index);
    white_.reset(index);
    if (c == Color::Black) black_.set(index);
    if (c == Color::White) white_.set(index);
  }

  /// True when every block has at least one liberty.
  bool is_legal() const;

  friend bool operator==(const Position&, const Position&) = default;

 private:
  int side_ = 0;
  BitBoard black_;
  BitBoard white_;
  Color to_move_ = Color::Black;
};

struct Block {
  Color color = Color::Empty;
  BitBoard stones;
  BitBoard liberties;
};

inline Block block_at(const Position& p, int index) {
  const Geometry& g = geometry(p.side());
  Block b;
  b.color = p.at(index);
  if (b.color == Color::Empty) return b;
  b.stones = g.flood(BitBoard::single(index), p.stones(b.color));
  b.liberties = g.neighbours(b.stones) & p.empty();
  return b;
}

/// Blocks of one color, ordered by lowest stone index.
inline std::vector<Block> blocks_of(const Position& p, Color c) {
  std::vector<Block> out;
  BitBoard rest = p.stones(c);
  while (rest.any()) {
    Block b = block_at(p, rest.lowest());
    rest = rest - b.stones;
    out.push_back(b);
  }
  return out;
}

/// All blocks, ordered by lowest stone index.
inline std::vector<Block> blocks(const Position& p) {
  std::vector<Block> out;
  BitBoard rest = p.occupied();
  while (rest.any()) {
    Block b = block_at(p, rest.lowest());
    rest = rest - b.stones;
    out.push_back(b);
  }
  return out;
}

inline bool Position::is_legal() const {
  const Geometry& g = geometry(side_);
  const BitBoard open = empty();
  for (Color c : {Color::Black, Color::White}) {
    BitBoard rest = stones(c);
    while (rest.any()) {
      BitBoard blk = g.flood(BitBoard::single(rest.lowest()), stones(c));
      if (!g.neighbours(blk).intersects(open)) return false;
      rest = rest - blk;
    }
  }
  return true;
}

inline Position Position::from_cells(int side, const std::vector<Color>& cells, Color to_move) {
  Position p(side, to_move);
  if (static_cast<int>(cells.size()) != side * side) {
    throw std::invalid_argument("cell count does not match board side");
  }
  for (int i = 0; i < side * side; ++i) p.put(i, cells[static_cast<std::size_t>(i)]);
  if (!p.is_legal()) throw IllegalMove("position contains a block without liberties");
  return p;
}

/// Result of applying a move: the new position and the stones it removed.
struct Played {
  Position position;
  BitBoard captured;
};

/// Rule-checked move application; nullopt for occupied cells and suicide.
inline std::optional<Played> try_play(const Position& p, Move m) {
  const Color me = p.to_move();
  const Color them = opponent(me);
  if (m.is_pass()) return Played{p.with_to_move(them), {}};

  const int idx = m.index();
  if (idx < 0 || idx >= p.area() || p.at(idx) != Color::Empty) return std::nullopt;

  const Geometry& g = geometry(p.side());
  Position next = p;
  next.put(idx, me);

  BitBoard captured;
  const BitBoard adjacent_them = g.neighbours(BitBoard::single(idx)) & next.stones(them);
  BitBoard seen;
  adjacent_them.for_each([&](int n) {
    if (seen.test(n)) return;
    BitBoard blk = g.flood(BitBoard::single(n), next.stones(them));
    seen |= blk;
    if (!g.neighbours(blk).intersects(next.empty())) captured |= blk;
  });
  captured.for_each([&](int i) { next.put(i, Color::Empty); });

  BitBoard mine = g.flood(BitBoard::single(idx), next.stones(me));
  if (!g.neighbours(mine).intersects(next.empty())) return std::nullopt;

  return Played{next.with_to_move(them), captured};
}

inline Position play(const Position& p, Move m) {
  if (!m.is_pass() && (m.index() < 0 || m.index() >= p.area())) {
    throw IllegalMove("move is off the board");
  }
  if (!m.is_pass() && p.at(m.index()) != Color::Empty) {
    throw IllegalMove("intersection " + to_coord(m.point(), p.side()) + " is occupied");
  }
  auto r = try_play(p, m);
  if (!r) throw IllegalMove("suicide at " + to_coord(m.point(), p.side()));
  return r->position;
}

/// Empty cells where play succeeds, ascending, then Pass.
inline std::vector<Move> legal_moves(const Position& p) {
  std::vector<Move> out;
  p.empty().for_each([&](int i) {
    if (try_play(p, Move::at(i))) out.push_back(Move::at(i));
  });
  out.push_back(Move::pass());
  return out;
}

// Problem file I/O.

inline std::string render_position(const Position& p) {
  std::ostringstream os;
  os << "size: " << p.side() << "\n";
  os << "to_move: " << color_letter(p.to_move()) << "\n";
  for (int row = p.side() - 1; row >= 0; --row) {
    for (int col = 0; col < p.side(); ++col) {
      Color c = p.at(row * p.side() + col);
      os << (c == Color::Black ? 'X' : c == Color::White ? 'O' : '.');
    }
    os << "\n";
  }
  return os.str();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::string_view header_value(std::string_view line, std::string_view key) {
  if (line.substr(0, key.size()) != key) {
    throw ParseError("expected '" + std::string(key) + "' line, got '" + std::string(line) + "'");
  }
  return trim(line.substr(key.size()));
}

}  // namespace detail

inline Position parse_position(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = detail::trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty() || line.front() == '#') continue;
    lines.push_back(line);
  }
  if (lines.empty()) throw ParseError("empty problem file");

  auto size_text = detail::header_value(lines[0], "size:");
  int side = 0;
  for (char ch : size_text) {
    if (ch < '0' || ch > '9') throw ParseError("bad board size '" + std::string(size_text) + "'");
    side = side * 10 + (ch - '0');
  }
  if (size_text.empty() || side < 1 || side > kMaxSide) {
    throw ParseError("board size must be in [1, " + std::to_string(kMaxSide) + "]");
  }
  if (lines.size() < 2 || lines[1].substr(0, 8) != "to_move:") {
    throw ParseError("missing to_move line");
  }
  auto who = detail::header_value(lines[1], "to_move:");
  Color to_move;
  if (who == "B") {
    to_move = Color::Black;
  } else if (who == "W") {
    to_move = Color::White;
  } else {
    throw ParseError("to_move must be B or W");
  }

  if (lines.size() != static_cast<std::size_t>(side) + 2) {
    throw ParseError("expected " + std::to_string(side) + " grid rows, got " +
                     std::to_string(lines.size() - 2));
  }
  std::vector<Color> cells(static_cast<std::size_t>(side * side), Color::Empty);
  for (int r = 0; r < side; ++r) {
    std::string_view row = lines[static_cast<std::size_t>(r) + 2];
    if (static_cast<int>(row.size()) != side) {
      throw ParseError("grid row " + std::to_string(r + 1) + " has length " +
                       std::to_string(row.size()) + ", expected " + std::to_string(side));
    }
    const int board_row = side - 1 - r;
    for (int c = 0; c < side; ++c) {
      Color color;
      switch (row[static_cast<std::size_t>(c)]) {
        case '.': color = Color::Empty; break;
        case 'X': color = Color::Black; break;
        case 'O': color = Color::White; break;
        default:
          throw ParseError(std::string("bad grid character '") + row[static_cast<std::size_t>(c)] +
                           "'");
      }
      cells[static_cast<std::size_t>(board_row * side + c)] = color;
    }
  }
  try {
    return Position::from_cells(side, cells, to_move);
  } catch (const IllegalMove& e) {
    throw ParseError(e.what());
  }
}

}  // namespace rzt

template <>
struct std::hash<rzt::Position> {
  std::size_t operator()(const rzt::Position& p) const noexcept {
    std::size_t h = std::hash<rzt::BitBoard>{}(p.black());
    h ^= std::hash<rzt::BitBoard>{}(p.white()) * 0x9E3779B97F4A7C15ULL + 0x7F4A7C15;
    return h ^ (static_cast<std::size_t>(p.to_move()) << 7) ^ static_cast<std::size_t>(p.side());
  }
};
