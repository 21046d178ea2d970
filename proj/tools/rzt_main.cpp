// rzt: solve problem suites, benchmark the pattern table on synthetic
// workloads, and check pattern dumps against the brute-force oracle.
//
// Exit codes: 0 ok, 1 I/O failure, 2 malformed input or flags,
// 3 counterexample found (verify), 4 verification budget exceeded (verify).

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rzt/bench.hpp"
#include "rzt/io.hpp"
#include "rzt/solver.hpp"

namespace fs = std::filesystem;
using namespace rzt;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitMalformed = 2;
constexpr int kExitCounterexample = 3;
constexpr int kExitBudget = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write " + path.string());
}

/// Files as given; directories expand to their *.txt files in name order.
std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const std::string& in : inputs) {
    const fs::path p(in);
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".txt") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(p);
    }
  }
  return out;
}

Color parse_player(const std::string& s) {
  if (s == "B") return Color::Black;
  if (s == "W") return Color::White;
  throw ParseError("player must be B or W");
}

struct TableFlags {
  std::string table = "radix";
  std::string timestamps = "on";
  std::string match = "first";
  double oci_fraction = 0.8;
  std::size_t small_interval = 100;
  double growth = 0.10;

  void add(CLI::App* app) {
    app->add_option("--table", table, "radix or linear")
        ->check(CLI::IsMember({"radix", "linear"}))
        ->capture_default_str();
    app->add_option("--timestamps", timestamps, "on or off")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    app->add_option("--match", match, "first or smallest")
        ->check(CLI::IsMember({"first", "smallest"}))
        ->capture_default_str();
    app->add_option("--oci-fraction", oci_fraction, "share of intersections in the key")
        ->capture_default_str();
    app->add_option("--rebuild-small-interval", small_interval,
                    "rebuild interval up to 1000 entries")
        ->capture_default_str();
    app->add_option("--rebuild-growth", growth, "growth factor between rebuilds after that")
        ->capture_default_str();
  }

  TableMode mode() const { return table == "linear" ? TableMode::Linear : TableMode::Radix; }
  ReconstructionConfig rebuild() const {
    ReconstructionConfig c;
    c.small_interval = small_interval;
    c.growth_factor = growth;
    c.oci_fraction = oci_fraction;
    c.validate();
    return c;
  }
};

// solve

struct SolveFlags {
  std::vector<std::string> inputs;
  std::string mode = "rzt";
  TableFlags table;
  int max_depth = 10;
  std::uint64_t max_nodes = 1'000'000;
  std::string or_player = "W";
  std::string out = "csv";
  std::string dump;
  std::uint64_t seed = 1;
};

int run_solve(const SolveFlags& f) {
  SolveConfig cfg;
  cfg.max_depth = f.max_depth;
  cfg.max_nodes = f.max_nodes;
  cfg.tables = f.mode == "none" ? TableUse::None
               : f.mode == "tt" ? TableUse::ExactTT
                                : TableUse::ExactTTWithRzt;
  cfg.structure = f.table.mode();
  cfg.timestamps = f.table.timestamps == "on";
  cfg.match = f.table.match == "smallest" ? MatchPolicy::Smallest : MatchPolicy::First;
  cfg.rebuild = f.table.rebuild();
  const Goal goal{parse_player(f.or_player)};
  if (cfg.max_depth < 0 || cfg.max_nodes == 0) throw ParseError("depth and node budget must be positive");

  const std::vector<fs::path> files = expand_inputs(f.inputs);
  if (files.empty()) throw ParseError("no problem files given");

  struct Row {
    std::string id;
    SolveResult result;
  };
  std::vector<Row> rows;
  std::vector<ZonePattern> dumped;
  for (const fs::path& file : files) {
    const Position p = parse_position(read_file(file));
    std::optional<PatternTable> table;
    if (cfg.tables == TableUse::ExactTTWithRzt) table.emplace(make_table(p.side(), cfg));
    SolveResult r = solve(p, goal, cfg, table ? &*table : nullptr);
    if (table) dumped.insert(dumped.end(), table->patterns().begin(), table->patterns().end());
    rows.push_back({file.stem().string(), r});
  }

  if (f.out == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const Row& row : rows) {
      const TableStats& s = row.result.table_stats;
      arr.push_back({{"id", row.id},
                     {"entries", s.entries},
                     {"lookups", s.lookups},
                     {"lookup_time_ms", std::stod(format_decimal(s.lookup_time_ms()))},
                     {"hits", s.hits},
                     {"compares", s.list_compares},
                     {"cost", s.cost()},
                     {"rebuilds", s.rebuild_count},
                     {"outcome", to_string(row.result.outcome)},
                     {"nodes", row.result.nodes},
                     {"win_depth", row.result.win_depth}});
    }
    std::cout << arr.dump(1) << "\n";
  } else {
    std::cout << kStatsHeader << "\n";
    for (const Row& row : rows) {
      std::cout << stats_row(row.id, row.result.table_stats, row.result.outcome, row.result.nodes)
                << "\n";
    }
  }

  std::uint64_t hits = 0;
  std::uint64_t smaller = 0;
  for (const Row& row : rows) {
    hits += row.result.table_stats.hits;
    smaller += row.result.table_stats.smaller_hits;
  }
  if (cfg.match == MatchPolicy::Smallest) {
    const double pct = hits ? 100.0 * static_cast<double>(smaller) / static_cast<double>(hits) : 0.0;
    std::cerr << "smaller-zone hits: " << smaller << "/" << hits << " (" << format_decimal(pct, 2)
              << "%)\n";
  }
  if (!f.dump.empty()) write_file(f.dump, write_pattern_dump(dumped, goal.or_player));
  return 0;
}

// bench

struct BenchFlags {
  WorkloadSpec spec;
  TableFlags table;
  std::string profile = "focused";
  std::string out = "csv";
};

int run_bench_cmd(BenchFlags f) {
  f.spec.structure = f.table.mode();
  f.spec.rebuild = f.table.rebuild();
  f.spec.profile = f.profile == "uniform" ? ZoneProfile::Uniform : ZoneProfile::Focused;
  try {
    f.spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  const BenchReport r = run_bench(f.spec);
  if (f.out == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const PhaseRow& row : r.phases) {
      nlohmann::json j = {{"phase", row.phase}, {"n_avg", row.n_avg()}, {"lookups", row.lookups}};
      const char* names[4] = {"hit_nt", "miss_nt", "hit_ts", "miss_ts"};
      for (int k = 0; k < 4; ++k) {
        j[std::string("c_avg_") + names[k]] = row.c_avg(k);
        j[std::string("r_") + names[k]] = row.ratio(k);
      }
      arr.push_back(j);
    }
    std::cout << arr.dump(1) << "\n";
  } else {
    std::cout << kPhaseHeader << "\n";
    for (const PhaseRow& row : r.phases) std::cout << phase_row_csv(row) << "\n";
  }
  const double ratio = r.ts.cost() ? static_cast<double>(r.nt.cost()) / static_cast<double>(r.ts.cost()) : 0.0;
  std::cerr << "queries " << r.queries << ", hits " << r.nt.hits << "; total cost NT " << r.nt.cost()
            << ", TS " << r.ts.cost() << " (NT/TS " << format_decimal(ratio, 2) << "); outcome mismatches "
            << r.outcome_mismatches << ", per-query cost violations " << r.cost_law_violations << "\n";
  return 0;
}

// verify

struct VerifyFlags {
  std::string input;
  int max_depth = -1;
  std::uint64_t budget = 1'000'000;
  std::string or_player;
};

int run_verify(const VerifyFlags& f) {
  const std::vector<DumpedPattern> dump = read_pattern_dump(read_file(f.input));
  std::optional<Color> forced;
  if (!f.or_player.empty()) forced = parse_player(f.or_player);

  std::map<std::pair<int, Color>, BruteForce> oracles;
  std::uint64_t positions = 0;
  for (std::size_t i = 0; i < dump.size(); ++i) {
    const DumpedPattern& d = dump[i];
    const Color or_player = forced ? *forced : d.or_player.value_or(Color::White);
    int depth = f.max_depth;
    if (depth < 0) depth = d.has_depth ? d.pattern.win_depth : 10;
    const int side = d.pattern.side();
    BruteForce& oracle = oracles.try_emplace({side, or_player}, Goal{or_player}).first->second;
    const VerifyResult v = verify_rzp(d.pattern, side, Goal{or_player}, depth, f.budget, &oracle);
    positions += v.checked;
    if (v.status == VerifyStatus::Counterexample) {
      std::cout << "pattern " << i << " (stamp " << d.pattern.stamp << "): counterexample at depth "
                << depth << "\n"
                << render_position(*v.counterexample);
      return kExitCounterexample;
    }
    if (v.status == VerifyStatus::BudgetExceeded) {
      std::cout << "pattern " << i << " (stamp " << d.pattern.stamp << "): budget of " << f.budget
                << " positions exceeded\n";
      return kExitBudget;
    }
  }
  std::cout << "verified " << dump.size() << " patterns, " << positions << " positions\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relevance-zone pattern table tools"};
  app.require_subcommand(1);

  SolveFlags solve_flags;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve life-and-death problems");
  solve_cmd->add_option("--in", solve_flags.inputs, "problem file or directory (repeatable)")->required();
  solve_cmd->add_option("--mode", solve_flags.mode, "none, tt or rzt")
      ->check(CLI::IsMember({"none", "tt", "rzt"}))
      ->capture_default_str();
  solve_flags.table.add(solve_cmd);
  solve_cmd->add_option("--max-depth", solve_flags.max_depth, "ply limit")->capture_default_str();
  solve_cmd->add_option("--max-nodes", solve_flags.max_nodes, "node budget per problem")
      ->capture_default_str();
  solve_cmd->add_option("--or-player", solve_flags.or_player, "player trying to live: B or W")
      ->check(CLI::IsMember({"B", "W"}))
      ->capture_default_str();
  solve_cmd->add_option("--seed", solve_flags.seed, "accepted for symmetry; solving is deterministic");
  solve_cmd->add_option("--out", solve_flags.out, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  solve_cmd->add_option("--dump", solve_flags.dump, "write every inserted pattern to this JSON file");

  BenchFlags bench_flags;
  CLI::App* bench_cmd = app.add_subcommand("bench", "drive the table with a synthetic workload");
  bench_cmd->add_option("--side", bench_flags.spec.side, "board side")->capture_default_str();
  bench_cmd->add_option("--entries", bench_flags.spec.entries, "patterns inserted")->capture_default_str();
  bench_cmd->add_option("--queries", bench_flags.spec.queries, "lookups issued")->capture_default_str();
  bench_cmd->add_option("--density", bench_flags.spec.density, "mean zone membership probability")
      ->capture_default_str();
  bench_cmd->add_option("--hit-mix", bench_flags.spec.hit_mix,
                        "share of new queries completing a stored pattern")
      ->capture_default_str();
  bench_cmd->add_option("--revisit", bench_flags.spec.revisit, "probability of re-asking an earlier query")
      ->capture_default_str();
  bench_cmd->add_option("--profile", bench_flags.profile, "focused or uniform zone membership")
      ->check(CLI::IsMember({"focused", "uniform"}))
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench_flags.spec.seed, "generator seed")->capture_default_str();
  bench_flags.table.add(bench_cmd);
  bench_cmd->add_option("--out", bench_flags.out, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  VerifyFlags verify_flags;
  CLI::App* verify_cmd = app.add_subcommand("verify", "check pattern dumps by brute force");
  verify_cmd->add_option("--in", verify_flags.input, "pattern dump (JSON)")->required();
  verify_cmd->add_option("--max-depth", verify_flags.max_depth,
                         "ply limit (default: each pattern's win_depth)");
  verify_cmd->add_option("--budget", verify_flags.budget, "positions checked per pattern")
      ->capture_default_str();
  verify_cmd->add_option("--or-player", verify_flags.or_player, "override the dump's OR player")
      ->check(CLI::IsMember({"B", "W"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitMalformed;
  }

  try {
    if (*solve_cmd) return run_solve(solve_flags);
    if (*bench_cmd) return run_bench_cmd(bench_flags);
    return run_verify(verify_flags);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  }
}
