#pragma once

#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rzt/board.hpp"
#include "rzt/pattern.hpp"
#include "rzt/solver.hpp"
#include "rzt/table.hpp"

namespace rzt {

// Pattern dump: a JSON array of
//   {"player": "B"|"W", "side": S, "zone": ["A1", ...],
//    "content": {"A1": "B"|"W"|"E", ...}, "stamp": n,
//    "win_depth": d, "or_player": "B"|"W"}
// The last two keys are optional on input.

struct DumpedPattern {
  ZonePattern pattern;
  std::optional<Color> or_player;
  bool has_depth = false;
};

inline nlohmann::json pattern_to_json(const ZonePattern& phi, std::optional<Color> or_player = {}) {
  const int side = phi.side();
  nlohmann::json zone = nlohmann::json::array();
  nlohmann::json content = nlohmann::json::object();
  phi.zone.members().for_each([&](int i) {
    const std::string c = to_coord(Point{i}, side);
    zone.push_back(c);
    content[c] = std::string(1, color_letter(phi.content(Point{i})));
  });
  nlohmann::json j = {{"player", std::string(1, color_letter(phi.player))},
                      {"side", side},
                      {"zone", zone},
                      {"content", content},
                      {"stamp", phi.stamp},
                      {"win_depth", phi.win_depth}};
  if (or_player) j["or_player"] = std::string(1, color_letter(*or_player));
  return j;
}

inline DumpedPattern pattern_from_json(const nlohmann::json& j) {
  try {
    DumpedPattern out;
    const int side = j.at("side").get<int>();
    if (side < 1 || side > kMaxSide) throw ParseError("bad side in pattern dump");
    ZonePattern& phi = out.pattern;
    phi.player = color_from_letter(j.at("player").get<std::string>());
    if (phi.player == Color::Empty) throw ParseError("pattern player must be B or W");
    BitBoard members;
    for (const auto& c : j.at("zone")) members.set(parse_coord(c.get<std::string>(), side).index);
    phi.zone = Zone(side, members);
    const auto& content = j.at("content");
    if (content.size() != static_cast<std::size_t>(members.count())) {
      throw ParseError("pattern content must cover exactly the zone");
    }
    for (const auto& [coord, value] : content.items()) {
      const Point at = parse_coord(coord, side);
      if (!members.test(at.index)) throw ParseError("content outside zone at " + coord);
      const Color c = color_from_letter(value.get<std::string>());
      if (c == Color::Black) phi.black.set(at.index);
      if (c == Color::White) phi.white.set(at.index);
    }
    phi.stamp = j.value("stamp", std::uint64_t{0});
    if (j.contains("win_depth")) {
      phi.win_depth = j.at("win_depth").get<int>();
      out.has_depth = true;
    }
    if (j.contains("or_player")) {
      out.or_player = color_from_letter(j.at("or_player").get<std::string>());
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("pattern dump: ") + e.what());
  }
}

inline std::string write_pattern_dump(std::span<const ZonePattern> patterns,
                                      std::optional<Color> or_player = {}) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ZonePattern& phi : patterns) arr.push_back(pattern_to_json(phi, or_player));
  return arr.dump(1) + "\n";
}

inline std::vector<DumpedPattern> read_pattern_dump(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("pattern dump: ") + e.what());
  }
  if (!j.is_array()) throw ParseError("pattern dump must be a JSON array");
  std::vector<DumpedPattern> out;
  for (const auto& item : j) out.push_back(pattern_from_json(item));
  return out;
}

// Stats CSV.

inline constexpr std::string_view kStatsHeader =
    "id,entries,lookups,lookup_time_ms,hits,compares,cost,rebuilds,outcome,nodes";

inline std::string format_decimal(double v, int places = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  return buf;
}

inline std::string stats_row(std::string_view id, const TableStats& s, Outcome outcome,
                             std::uint64_t nodes) {
  std::string row(id);
  row += ',' + std::to_string(s.entries);
  row += ',' + std::to_string(s.lookups);
  row += ',' + format_decimal(s.lookup_time_ms());
  row += ',' + std::to_string(s.hits);
  row += ',' + std::to_string(s.list_compares);
  row += ',' + std::to_string(s.cost());
  row += ',' + std::to_string(s.rebuild_count);
  row += ',';
  row += to_string(outcome);
  row += ',' + std::to_string(nodes);
  return row;
}

}  // namespace rzt
