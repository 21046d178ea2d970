#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rzt/board.hpp"
#include "rzt/io.hpp"
#include "rzt/pattern.hpp"
#include "rzt/table.hpp"

namespace rzt {

/// How zone membership probability is spread over the board.
///  Uniform: every intersection joins a zone with probability `density`.
///  Focused: probability decays with distance from the lower-left corner
///           (a corner life-and-death area), rescaled so the board-wide mean
///           is still `density`.
enum class ZoneProfile { Uniform, Focused };

struct WorkloadSpec {
  int side = 7;
  std::size_t entries = 20000;
  std::size_t queries = 100000;
  double density = 0.3;
  /// Share of freshly generated queries that complete a stored pattern.
  double hit_mix = 0.02;
  /// Probability that a query re-asks an earlier queried position.
  double revisit = 0.75;
  ZoneProfile profile = ZoneProfile::Focused;
  TableMode structure = TableMode::Radix;
  ReconstructionConfig rebuild;
  std::uint64_t seed = 1;

  void validate() const {
    if (side < 2 || side > kMaxSide) throw std::invalid_argument("side must be in [2, 9]");
    if (entries == 0) throw std::invalid_argument("entries must be positive");
    if (!(density > 0.0 && density <= 1.0)) throw std::invalid_argument("density must be in (0, 1]");
    if (!(hit_mix >= 0.0 && hit_mix <= 1.0)) throw std::invalid_argument("hit mix must be in [0, 1]");
    if (!(revisit >= 0.0 && revisit < 1.0)) throw std::invalid_argument("revisit must be in [0, 1)");
    rebuild.validate();
  }
};

/// Deterministic pattern and query source.
class WorkloadGenerator {
 public:
  explicit WorkloadGenerator(const WorkloadSpec& spec)
      : spec_(spec), rng_(spec.seed), membership_(membership_profile(spec)) {}

  ZonePattern next_pattern() {
    ZonePattern phi;
    phi.player = coin(0.5) ? Color::Black : Color::White;
    BitBoard members;
    for (int i = 0; i < area(); ++i) {
      if (!coin(membership_[static_cast<std::size_t>(i)])) continue;
      members.set(i);
      switch (below(3)) {
        case 0: phi.black.set(i); break;
        case 1: phi.white.set(i); break;
        default: break;
      }
    }
    phi.zone = Zone(spec_.side, members);
    return phi;
  }

  /// A position agreeing with phi inside its zone, random elsewhere.
  Position complete(const ZonePattern& phi) {
    Position p = random_position();
    phi.zone.members().for_each([&](int i) { p.put(i, phi.content(Point{i})); });
    return p.with_to_move(phi.player);
  }

  Position random_position() {
    BitBoard black, white;
    for (int i = 0; i < area(); ++i) {
      switch (below(3)) {
        case 0: black.set(i); break;
        case 1: white.set(i); break;
        default: break;
      }
    }
    return Position::unchecked(spec_.side, black, white, coin(0.5) ? Color::Black : Color::White);
  }

  bool coin(double p) { return static_cast<double>(rng_() >> 11) * 0x1.0p-53 < p; }
  std::uint64_t below(std::uint64_t n) { return rng_() % n; }

  const std::vector<double>& membership() const { return membership_; }

  static std::vector<double> membership_profile(const WorkloadSpec& spec) {
    const int area = spec.side * spec.side;
    std::vector<double> w(static_cast<std::size_t>(area), 1.0);
    if (spec.profile == ZoneProfile::Uniform) {
      for (double& x : w) x = spec.density;
      return w;
    }
    const double scale = spec.side / 2.0;
    for (int i = 0; i < area; ++i) {
      const double r = i / spec.side;
      const double c = i % spec.side;
      w[static_cast<std::size_t>(i)] = std::exp(-std::sqrt(r * r + c * c) / scale);
    }
    // Bisection on a multiplier so that mean(min(1, k * w)) == density.
    auto mean_at = [&](double k) {
      double sum = 0;
      for (double x : w) sum += std::min(1.0, k * x);
      return sum / area;
    };
    double lo = 0.0;
    double hi = 1.0;
    while (mean_at(hi) < spec.density && hi < 1e9) hi *= 2;
    for (int it = 0; it < 100; ++it) {
      const double mid = (lo + hi) / 2;
      (mean_at(mid) < spec.density ? lo : hi) = mid;
    }
    for (double& x : w) x = std::min(1.0, hi * x);
    return w;
  }

 private:
  int area() const { return spec_.side * spec_.side; }

  WorkloadSpec spec_;
  std::mt19937_64 rng_;
  std::vector<double> membership_;
};

/// Series index: hit/miss without timestamps, then with timestamps.
enum Series { kHitNT = 0, kMissNT = 1, kHitTS = 2, kMissTS = 3 };

struct PhaseRow {
  std::uint64_t phase = 0;
  std::uint64_t lookups = 0;
  double n_sum = 0;
  std::array<double, 4> c_sum{};
  std::array<std::uint64_t, 4> count{};

  double n_avg() const { return lookups ? n_sum / static_cast<double>(lookups) : 0.0; }
  double c_avg(int s) const {
    return count[s] ? c_sum[s] / static_cast<double>(count[s]) : 0.0;
  }
  /// log(c_avg) / log(n_avg); 0 when either side is degenerate.
  double ratio(int s) const {
    const double c = c_avg(s);
    const double n = n_avg();
    if (count[s] == 0 || c <= 0.0 || n <= 1.0) return 0.0;
    return std::log(c) / std::log(n);
  }
};

struct BenchReport {
  std::vector<PhaseRow> phases;
  TableStats nt;
  TableStats ts;
  std::uint64_t queries = 0;
  /// Queries where the timestamped table disagreed on hit/miss.
  std::uint64_t outcome_mismatches = 0;
  /// Queries where the timestamped table cost more than the plain one.
  std::uint64_t cost_law_violations = 0;
};

inline constexpr std::string_view kPhaseHeader =
    "phase,n_avg,c_avg_hit_nt,c_avg_miss_nt,c_avg_hit_ts,c_avg_miss_ts,"
    "r_hit_nt,r_miss_nt,r_hit_ts,r_miss_ts";

inline std::string phase_row_csv(const PhaseRow& row) {
  std::string s = std::to_string(row.phase);
  s += ',' + format_decimal(row.n_avg(), 2);
  for (int k = 0; k < 4; ++k) s += ',' + format_decimal(row.c_avg(k), 3);
  for (int k = 0; k < 4; ++k) s += ',' + format_decimal(row.ratio(k), 4);
  return s;
}

/// Drives two identical tables, timestamps off and on, through one synthetic
/// insert/query stream and records per-phase traversal cost.
///
/// The cost sampled per lookup is tree node visits (chain compares excluded)
/// in radix mode and list compares in linear mode; n is the size of the
/// queried player's structure. A phase is the span between rebuilds.
inline BenchReport run_bench(const WorkloadSpec& spec) {
  spec.validate();
  WorkloadGenerator gen(spec);
  PatternTable nt(spec.side, spec.structure, false, spec.rebuild);
  PatternTable ts(spec.side, spec.structure, true, spec.rebuild);

  struct Query {
    Position pos;
    SearchStamp nt;
    SearchStamp ts;
  };
  std::vector<Query> pool;
  std::vector<ZonePattern> generated;
  BenchReport report;

  auto sample_cost = [&](const PatternTable& t) {
    const LookupTrace& tr = t.last_lookup();
    return spec.structure == TableMode::Radix ? tr.node_visits : tr.list_compares;
  };

  auto one_query = [&] {
    std::size_t idx;
    if (!pool.empty() && gen.coin(spec.revisit)) {
      idx = static_cast<std::size_t>(gen.below(pool.size()));
    } else {
      Position p = (!generated.empty() && gen.coin(spec.hit_mix))
                       ? gen.complete(generated[gen.below(generated.size())])
                       : gen.random_position();
      pool.push_back({p, {}, {}});
      idx = pool.size() - 1;
    }
    Query& q = pool[idx];
    const std::uint64_t phase = ts.stats().rebuild_count;
    const double n = static_cast<double>(ts.structure_size(q.pos.to_move()));

    const bool hit_nt = nt.lookup(q.pos, q.nt) != nullptr;
    const bool hit_ts = ts.lookup(q.pos, q.ts) != nullptr;
    const LookupTrace& a = nt.last_lookup();
    const LookupTrace& b = ts.last_lookup();
    if (hit_nt != hit_ts) ++report.outcome_mismatches;
    if (b.node_visits + b.list_compares > a.node_visits + a.list_compares) {
      ++report.cost_law_violations;
    }

    if (report.phases.empty() || report.phases.back().phase != phase) {
      report.phases.push_back(PhaseRow{});
      report.phases.back().phase = phase;
    }
    PhaseRow& row = report.phases.back();
    ++row.lookups;
    row.n_sum += n;
    const int snt = hit_nt ? kHitNT : kMissNT;
    const int sts = hit_ts ? kHitTS : kMissTS;
    row.c_sum[snt] += static_cast<double>(sample_cost(nt));
    ++row.count[snt];
    row.c_sum[sts] += static_cast<double>(sample_cost(ts));
    ++row.count[sts];
    ++report.queries;
  };

  std::size_t done = 0;
  for (std::size_t i = 1; i <= spec.entries; ++i) {
    ZonePattern phi = gen.next_pattern();
    generated.push_back(phi);
    nt.insert(phi);
    ts.insert(phi);
    const std::size_t target = i * spec.queries / spec.entries;
    for (; done < target; ++done) one_query();
  }
  report.nt = nt.stats();
  report.ts = ts.stats();
  return report;
}

}  // namespace rzt
