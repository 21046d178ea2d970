#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "rzt/bench.hpp"
#include "rzt/table.hpp"

using namespace rzt;

namespace {

// Black-to-move pattern on a 3x3 board with the given zone and content.
ZonePattern black_pattern(std::initializer_list<std::pair<int, Color>> cells) {
  ZonePattern phi;
  phi.player = Color::Black;
  BitBoard members;
  for (auto [i, c] : cells) {
    members.set(i);
    if (c == Color::Black) phi.black.set(i);
    if (c == Color::White) phi.white.set(i);
  }
  phi.zone = Zone(3, members);
  return phi;
}

ZonePattern white_filler() {
  ZonePattern phi;
  phi.player = Color::White;
  phi.zone = Zone(3, BitBoard::single(8));
  return phi;
}

constexpr int A1 = 0, B1 = 1, C1 = 2;

// Linear-scan oracle: every stored pattern matching p.
std::vector<const ZonePattern*> all_matches(const PatternTable& t, const Position& p) {
  std::vector<const ZonePattern*> out;
  for (const ZonePattern& phi : t.patterns()) {
    if (matches(p, phi)) out.push_back(&phi);
  }
  return out;
}

WorkloadSpec small_spec(std::uint64_t seed) {
  WorkloadSpec s;
  s.side = 5;
  s.density = 0.35;
  s.hit_mix = 0.2;
  s.profile = ZoneProfile::Uniform;
  s.seed = seed;
  return s;
}

}  // namespace

TEST(Table, FreshTable) {
  PatternTable t(7);
  EXPECT_EQ(t.size(), 0u);
  EXPECT_EQ(t.stats().lookups, 0u);
  SearchStamp s;
  EXPECT_EQ(t.lookup(Position(7, Color::Black), s), nullptr);
  EXPECT_EQ(t.stats().node_visits, 0u);
  EXPECT_EQ(t.stats().cost(), 0u);
  EXPECT_EQ(t.stats().lookups, 1u);
  EXPECT_EQ(t.stats().hits, 0u);
  EXPECT_THROW(PatternTable(3, TableMode::Radix, true, ReconstructionConfig{1000, 0, 0.1, 0.8}),
               std::invalid_argument);
  EXPECT_THROW(PatternTable(3, TableMode::Radix, true, ReconstructionConfig{1000, 100, 0.1, 0.0}),
               std::invalid_argument);
}

TEST(Table, FirstInsertPath) {
  PatternTable t(3);
  t.reconstruct(Oci({Point{A1}, Point{B1}}, 3));
  t.insert(black_pattern({{A1, Color::Black}}));
  EXPECT_EQ(to_string(t.key_of(t.patterns()[0])), "BN");
  EXPECT_EQ(t.node_count(Color::Black), 3u);  // root, B, BN
  EXPECT_EQ(t.global_stamp(), 1u);
  EXPECT_EQ(t.check_invariants(), "");
  // Same key again: one leaf chain of two.
  t.insert(black_pattern({{A1, Color::Black}, {C1, Color::White}}));
  EXPECT_EQ(t.node_count(Color::Black), 3u);
  EXPECT_EQ(t.check_invariants(), "");
  Position p(3, Color::Black);
  p.put(A1, Color::Black);
  p.put(C1, Color::White);
  SearchStamp s;
  const ZonePattern* hit = t.lookup(p, s);
  ASSERT_NE(hit, nullptr);
  EXPECT_EQ(hit->stamp, 2u);  // newest first
}

TEST(Table, OneInsertOneMissStats) {
  PatternTable t(3);
  t.insert(black_pattern({{A1, Color::Black}}));
  SearchStamp s;
  EXPECT_EQ(t.lookup(Position(3, Color::Black), s), nullptr);
  EXPECT_EQ(t.stats().entries, 1u);
  EXPECT_EQ(t.stats().lookups, 1u);
  EXPECT_EQ(t.stats().hits, 0u);
  EXPECT_EQ(s.value, 1u);
}

// Timestamp walk on an engineered tree over OCI (A1, B1): the query has
// Black at A1 and White at B1, search stamp 25, global stamp 48.
class StampWalk : public ::testing::Test {
 protected:
  void SetUp() override {
    for (std::uint64_t stamp = 1; stamp <= 48; ++stamp) {
      switch (stamp) {
        case 14:
        case 26:
        case 32:  // key BW, none matches the query (C1 differs)
          t.insert(black_pattern({{A1, Color::Black}, {B1, Color::White}, {C1, Color::Black}}));
          break;
        case 22:  // key BN
          t.insert(black_pattern({{A1, Color::Black}, {C1, Color::Black}}));
          break;
        case 48:  // key BE
          t.insert(black_pattern({{A1, Color::Black}, {B1, Color::Empty}}));
          break;
        default:
          t.insert(white_filler());
      }
    }
    t.reconstruct(Oci({Point{A1}, Point{B1}}, 3));
    query = Position(3, Color::Black);
    query.put(A1, Color::Black);
    query.put(B1, Color::White);
  }

  PatternTable t{3};
  Position query;
};

TEST_F(StampWalk, SkipsOldSubtrees) {
  ASSERT_EQ(t.check_invariants(), "");
  SearchStamp s{25};
  EXPECT_EQ(t.lookup(query, s), nullptr);
  // root, B, BW (stamps 32 and 26 compared, stop at 14), BN skipped at 22.
  EXPECT_EQ(t.last_lookup().node_visits, 4u);
  EXPECT_EQ(t.last_lookup().list_compares, 2u);
  EXPECT_EQ(s.value, 48u);
  EXPECT_EQ(t.lookup(query, s), nullptr);
  EXPECT_EQ(t.last_lookup().node_visits, 1u);
  EXPECT_EQ(t.last_lookup().list_compares, 0u);
}

TEST_F(StampWalk, WithoutTimestampsEverythingIsCompared) {
  PatternTable plain(3, TableMode::Radix, false);
  for (const ZonePattern& phi : t.patterns()) plain.insert(phi);
  plain.reconstruct(t.oci());
  SearchStamp s{25};
  EXPECT_EQ(plain.lookup(query, s), nullptr);
  EXPECT_EQ(plain.last_lookup().node_visits, 4u);
  EXPECT_EQ(plain.last_lookup().list_compares, 4u);
  EXPECT_EQ(s.value, 25u);
}

TEST_F(StampWalk, NewPatternIsFound) {
  SearchStamp s{25};
  EXPECT_EQ(t.lookup(query, s), nullptr);
  t.insert(black_pattern({{A1, Color::Black}, {B1, Color::White}}));
  const ZonePattern* hit = t.lookup(query, s);
  ASSERT_NE(hit, nullptr);
  EXPECT_EQ(hit->stamp, 49u);
  EXPECT_EQ(t.last_lookup().list_compares, 1u);
  EXPECT_EQ(s.value, 48u);  // unchanged on a hit
}

TEST(Table, NBranchPlacement) {
  // Two patterns whose zones leave out the second key intersection sit under
  // N at depth 2; two that cover both sit under concrete branches.
  PatternTable t(3);
  t.reconstruct(Oci({Point{4}, Point{1}}, 3));
  t.insert(black_pattern({{4, Color::White}, {3, Color::Black}}));
  t.insert(black_pattern({{4, Color::White}, {5, Color::Black}}));
  t.insert(black_pattern({{4, Color::White}, {1, Color::Black}, {3, Color::Empty}}));
  t.insert(black_pattern({{4, Color::White}, {1, Color::Empty}}));
  std::vector<std::string> keys;
  for (const ZonePattern& phi : t.patterns()) keys.push_back(to_string(t.key_of(phi)));
  EXPECT_EQ(keys, (std::vector<std::string>{"WN", "WN", "WB", "WE"}));
  // root, W, WN, WB, WE
  EXPECT_EQ(t.node_count(Color::Black), 5u);
  EXPECT_EQ(t.check_invariants(), "");
}

TEST(Table, LinearUntilFirstRebuild) {
  PatternTable t(5);
  WorkloadGenerator gen(small_spec(3));
  for (int i = 1; i <= 99; ++i) {
    t.insert(gen.next_pattern());
    EXPECT_FALSE(t.is_tree());
    EXPECT_LE(t.node_count(), 2u);
  }
  EXPECT_EQ(t.insert(gen.next_pattern()), Maintenance::Rebuilt);
  EXPECT_TRUE(t.is_tree());
  EXPECT_EQ(t.oci().size(), 20u);  // floor(0.8 * 25)
  EXPECT_EQ(t.check_invariants(), "");
}

TEST(Schedule, DueCounts) {
  PatternTable t(5);
  WorkloadGenerator gen(small_spec(4));
  std::vector<std::size_t> due;
  for (std::size_t n = 1; n <= 1400; ++n) {
    t.insert(gen.next_pattern());
    // rebuild_due() is evaluated inside insert; reproduce it from outside by
    // looking at last_rebuild_size.
    if (t.last_rebuild_size() == n) due.push_back(n);
  }
  std::vector<std::size_t> expect;
  for (std::size_t n = 100; n <= 1000; n += 100) expect.push_back(n);
  expect.push_back(1100);
  expect.push_back(1210);
  expect.push_back(1331);
  EXPECT_EQ(due, expect);
}

TEST(Schedule, GrowthRule) {
  ReconstructionConfig cfg;
  PatternTable t(5, TableMode::Radix, true, cfg);
  WorkloadGenerator gen(small_spec(5));
  for (int i = 0; i < 1000; ++i) t.insert(gen.next_pattern());
  ASSERT_EQ(t.last_rebuild_size(), 1000u);
  for (int i = 0; i < 50; ++i) t.insert(gen.next_pattern());
  EXPECT_FALSE(t.rebuild_due());  // 1050
  for (int i = 0; i < 49; ++i) {
    t.insert(gen.next_pattern());
    EXPECT_EQ(t.last_rebuild_size(), 1000u);
  }
  t.insert(gen.next_pattern());  // 1100
  EXPECT_EQ(t.last_rebuild_size(), 1100u);
}

TEST(Schedule, UnchangedOciSkipsRebuild) {
  PatternTable t(3);
  // Every pattern covers the same zone, so the OCI never changes.
  ZonePattern phi = black_pattern({{0, Color::Black}, {1, Color::Black}, {2, Color::White}, {3, Color::Empty},
                                   {4, Color::Empty}, {5, Color::Empty}, {6, Color::White}});
  std::vector<Maintenance> at;
  for (int i = 1; i <= 300; ++i) {
    Maintenance m = t.insert(phi);
    if (i % 100 == 0) at.push_back(m);
  }
  EXPECT_EQ(at, (std::vector<Maintenance>{Maintenance::Rebuilt, Maintenance::Unchanged,
                                          Maintenance::Unchanged}));
  EXPECT_EQ(t.stats().rebuild_count, 1u);
  EXPECT_EQ(t.last_rebuild_size(), 300u);
  const std::size_t nodes = t.node_count();
  for (int i = 0; i < 100; ++i) t.insert(phi);
  EXPECT_EQ(t.node_count(), nodes);
  EXPECT_EQ(t.stats().rebuild_count, 1u);
}

TEST(Oci, AllZeroTieBreak) {
  std::vector<std::uint64_t> tally(9, 0);
  Oci oci = compute_oci(tally, 0.8, 3);
  ASSERT_EQ(oci.size(), 7u);
  for (int i = 0; i < 7; ++i) EXPECT_EQ(oci[static_cast<std::size_t>(i)].index, i);
}

TEST(Oci, DominantCountsFirst) {
  std::vector<std::uint64_t> tally(16, 0);
  tally[9] = 5;
  tally[2] = 3;
  tally[14] = 1;
  Oci oci = compute_oci(tally, 0.8, 4);
  EXPECT_EQ(oci[0].index, 9);
  EXPECT_EQ(oci[1].index, 2);
  EXPECT_EQ(oci[2].index, 14);
  EXPECT_EQ(oci[3].index, 0);
  EXPECT_EQ(oci_length(0.01, 3), 1u);
  EXPECT_THROW(compute_oci(tally, 1.5, 4), std::invalid_argument);
}

TEST(Oci, MatchesFullSortReference) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const int side = 1 + static_cast<int>(rng() % 9);
    const double fraction = 0.05 + 0.95 * static_cast<double>(rng() % 1000) / 999.0;
    std::vector<std::uint64_t> tally(static_cast<std::size_t>(side * side));
    for (auto& v : tally) v = rng() % 6;
    std::vector<std::pair<std::int64_t, int>> ref;
    for (int i = 0; i < side * side; ++i) ref.push_back({-static_cast<std::int64_t>(tally[i]), i});
    std::sort(ref.begin(), ref.end());
    const auto n = static_cast<std::size_t>(
        std::max<long>(1, static_cast<long>(std::floor(fraction * side * side + 1e-9))));
    Oci oci = compute_oci(tally, fraction, side);
    ASSERT_EQ(oci.size(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(oci[i].index, ref[i].second);
  }
}

TEST(Reconstruct, PreservesStampsAndHits) {
  PatternTable t(5);
  WorkloadGenerator gen(small_spec(9));
  for (int i = 0; i < 700; ++i) t.insert(gen.next_pattern());
  std::vector<std::uint64_t> before;
  for (const ZonePattern& phi : t.patterns()) before.push_back(phi.stamp);

  std::mt19937_64 rng(10);
  std::vector<Point> pts;
  for (int i = 0; i < 25; ++i) pts.push_back(Point{i});
  for (int round = 0; round < 5; ++round) {
    std::shuffle(pts.begin(), pts.end(), rng);
    const std::size_t len = 1 + rng() % 25;
    t.reconstruct(Oci(std::vector<Point>(pts.begin(), pts.begin() + static_cast<long>(len)), 5));
    ASSERT_EQ(t.check_invariants(), "");
    std::vector<std::uint64_t> after;
    for (const ZonePattern& phi : t.patterns()) after.push_back(phi.stamp);
    EXPECT_EQ(before, after);
    EXPECT_EQ(t.global_stamp(), 700u);
    for (const ZonePattern& phi : t.patterns()) {
      Position q = gen.complete(phi);
      SearchStamp s;
      const ZonePattern* hit = t.lookup(q, s);
      ASSERT_NE(hit, nullptr);
      EXPECT_TRUE(matches(q, *hit));
    }
  }
}

TEST(Reconstruct, SameOciIsIdempotent) {
  PatternTable t(5);
  WorkloadGenerator gen(small_spec(11));
  for (int i = 0; i < 450; ++i) t.insert(gen.next_pattern());
  std::vector<Position> queries;
  for (int i = 0; i < 300; ++i) queries.push_back(gen.random_position());
  auto answers = [&] {
    std::vector<std::uint64_t> out;
    for (const Position& q : queries) {
      SearchStamp s;
      const ZonePattern* hit = t.lookup(q, s);
      out.push_back(hit ? hit->stamp : 0);
    }
    return out;
  };
  const auto first = answers();
  const std::size_t nodes = t.node_count();
  t.reconstruct(t.oci());
  EXPECT_EQ(answers(), first);
  EXPECT_EQ(t.node_count(), nodes);
}

// Radix and linear tables, timestamps on and off, fed the same stream.
TEST(Oracle, RadixAgreesWithLinear) {
  WorkloadSpec spec = small_spec(12);
  WorkloadGenerator gen(spec);
  PatternTable radix_nt(5, TableMode::Radix, false);
  PatternTable radix_ts(5, TableMode::Radix, true);
  PatternTable linear_nt(5, TableMode::Linear, false);
  PatternTable linear_ts(5, TableMode::Linear, true);
  for (PatternTable* t : {&radix_ts, &linear_ts}) t->set_skip_audit(true);
  struct Q {
    Position p;
    std::array<SearchStamp, 4> s;
  };
  std::vector<Q> pool;
  std::vector<ZonePattern> stored;
  int hits = 0;
  for (int i = 0; i < 10000; ++i) {
    ZonePattern phi = gen.next_pattern();
    stored.push_back(phi);
    for (PatternTable* t : {&radix_nt, &radix_ts, &linear_nt, &linear_ts}) t->insert(phi);

    std::size_t k;
    if (!pool.empty() && gen.coin(0.5)) {
      k = gen.below(pool.size());
    } else {
      pool.push_back({gen.coin(0.3) ? gen.complete(stored[gen.below(stored.size())])
                                    : gen.random_position(),
                      {}});
      k = pool.size() - 1;
    }
    Q& q = pool[k];
    const ZonePattern* r[4] = {radix_nt.lookup(q.p, q.s[0]), radix_ts.lookup(q.p, q.s[1]),
                               linear_nt.lookup(q.p, q.s[2]), linear_ts.lookup(q.p, q.s[3])};
    const bool expect = !all_matches(linear_nt, q.p).empty();
    for (const ZonePattern* x : r) {
      ASSERT_EQ(x != nullptr, expect) << "query " << i;
      if (x) {
        EXPECT_TRUE(matches(q.p, *x));
      }
    }
    // Timestamps never change which pattern is returned.
    if (expect) {
      EXPECT_EQ(r[0]->stamp, r[1]->stamp);
      EXPECT_EQ(r[2]->stamp, r[3]->stamp);
      EXPECT_EQ(r[2]->stamp, all_matches(linear_nt, q.p).back()->stamp);  // newest
    }
    hits += expect;
  }
  EXPECT_GT(hits, 500);
  EXPECT_EQ(radix_ts.skip_violations(), 0u);
  EXPECT_EQ(linear_ts.skip_violations(), 0u);
  for (PatternTable* t : {&radix_nt, &radix_ts, &linear_nt, &linear_ts}) {
    EXPECT_EQ(t->check_invariants(), "");
  }
}

TEST(Oracle, TimestampsNeverCostMore) {
  WorkloadSpec spec = small_spec(13);
  spec.entries = 3000;
  spec.queries = 12000;
  spec.hit_mix = 0.05;
  spec.revisit = 0.7;
  BenchReport r = run_bench(spec);
  EXPECT_EQ(r.outcome_mismatches, 0u);
  EXPECT_EQ(r.cost_law_violations, 0u);
  EXPECT_LT(r.ts.cost(), r.nt.cost());
  spec.structure = TableMode::Linear;
  r = run_bench(spec);
  EXPECT_EQ(r.outcome_mismatches, 0u);
  EXPECT_EQ(r.cost_law_violations, 0u);
  EXPECT_LT(r.ts.cost(), r.nt.cost());
}

TEST(Match, SmallestZoneAmongMatches) {
  WorkloadGenerator gen(small_spec(14));
  for (TableMode mode : {TableMode::Radix, TableMode::Linear}) {
    PatternTable t(5, mode, false, {}, MatchPolicy::Smallest);
    PatternTable first(5, mode, false, {}, MatchPolicy::First);
    std::vector<ZonePattern> stored;
    std::uint64_t differing = 0;
    for (int i = 0; i < 3000; ++i) {
      ZonePattern phi = gen.next_pattern();
      stored.push_back(phi);
      t.insert(phi);
      first.insert(phi);
      Position q = gen.coin(0.5) ? gen.complete(stored[gen.below(stored.size())]) : gen.random_position();
      SearchStamp s, s2;
      const ZonePattern* got = t.lookup(q, s);
      const ZonePattern* f = first.lookup(q, s2);
      const auto all = all_matches(t, q);
      ASSERT_EQ(got != nullptr, !all.empty());
      if (!got) continue;
      int best = 1 << 30;
      for (const ZonePattern* m : all) best = std::min(best, m->zone.size());
      EXPECT_EQ(got->zone.size(), best);
      if (f->stamp != got->stamp) ++differing;
    }
    EXPECT_EQ(t.stats().smaller_hits, differing);
  }
}

TEST(Invariants, HoldAfterMixedOperations) {
  WorkloadSpec spec = small_spec(15);
  spec.side = 6;
  WorkloadGenerator gen(spec);
  PatternTable t(6);
  for (int i = 0; i < 2500; ++i) {
    t.insert(gen.next_pattern());
    if (i % 250 == 249) {
      ASSERT_EQ(t.check_invariants(), "") << i;
    }
  }
  EXPECT_EQ(t.global_stamp(), t.size());
  std::uint64_t tally_total = 0;
  for (auto v : t.tally()) tally_total += v;
  std::uint64_t zone_total = 0;
  for (const ZonePattern& phi : t.patterns()) zone_total += static_cast<std::uint64_t>(phi.zone.size());
  EXPECT_EQ(tally_total, zone_total);
}

TEST(Bench, Deterministic) {
  WorkloadSpec spec = small_spec(16);
  spec.entries = 1500;
  spec.queries = 4000;
  auto csv = [&] {
    std::string out;
    for (const PhaseRow& row : run_bench(spec).phases) out += phase_row_csv(row) + "\n";
    return out;
  };
  EXPECT_EQ(csv(), csv());
}

TEST(Bench, FocusedProfileKeepsMeanDensity) {
  WorkloadSpec spec;
  spec.side = 7;
  spec.density = 0.3;
  const auto w = WorkloadGenerator::membership_profile(spec);
  const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
  EXPECT_NEAR(mean, 0.3, 1e-9);
  EXPECT_GT(w.front(), w.back());
  for (double x : w) EXPECT_LE(x, 1.0);
}
