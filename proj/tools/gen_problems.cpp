// Writes the fixed regression suite of small life-and-death problems.
//
// Positions are random legal fillings; a candidate is kept when White (the
// side trying to live) is not already safe and the plain transposition-table
// solver needs a non-trivial search at depth 8. Selection never looks at
// pattern-table runs. Each board size gets an even split of wins and
// unknowns.
//
//   rzt_gen_problems OUT_DIR [--seed N] [--per-size N]

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "rzt/solver.hpp"

using namespace rzt;

namespace {

Position random_legal(std::mt19937_64& rng, int side) {
  while (true) {
    BitBoard b, w;
    for (int i = 0; i < side * side; ++i) {
      const int r = static_cast<int>(rng() % 100);
      if (r < 25) {
        b.set(i);
      } else if (r < 60) {
        w.set(i);
      }
    }
    Position p = Position::unchecked(side, b, w, rng() % 2 ? Color::Black : Color::White);
    if (p.is_legal()) return p;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the regression problem suite"};
  std::string out_dir;
  std::uint64_t seed = 20240601;
  int per_size = 12;
  int depth = 8;
  app.add_option("out_dir", out_dir)->required();
  app.add_option("--seed", seed)->capture_default_str();
  app.add_option("--per-size", per_size, "problems per board size (half wins)")->capture_default_str();
  app.add_option("--depth", depth)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  std::filesystem::create_directories(out_dir);
  std::mt19937_64 rng(seed);
  SolveConfig cfg;
  cfg.max_depth = depth;
  cfg.max_nodes = 200'000;
  cfg.tables = TableUse::ExactTT;
  const Goal goal{Color::White};

  for (int side : {4, 5}) {
    int wins = 0;
    int unknowns = 0;
    while (wins + unknowns < per_size) {
      const Position p = random_legal(rng, side);
      if (!benson_safe_zone(p, goal.or_player).blocks.empty()) continue;
      if (p.white().count() < side) continue;
      const SolveResult r = solve(p, goal, cfg);
      if (r.budget_exhausted || r.nodes < 40) continue;
      const bool win = r.outcome == Outcome::Win;
      int& slot = win ? wins : unknowns;
      if (slot >= per_size / 2) continue;
      ++slot;
      char name[32];
      std::snprintf(name, sizeof name, "p%dx%d_%02d.txt", side, side, wins + unknowns);
      std::ofstream out(std::filesystem::path(out_dir) / name);
      out << "# White to live within " << depth << " plies; plain-TT result: " << to_string(r.outcome)
          << ", " << r.nodes << " nodes\n"
          << render_position(p);
      if (!out) {
        std::cerr << "cannot write " << name << "\n";
        return 1;
      }
    }
  }
  return 0;
}
