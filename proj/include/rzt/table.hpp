#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rzt/board.hpp"
#include "rzt/oci.hpp"
#include "rzt/pattern.hpp"

namespace rzt {

enum class TableMode { Radix, Linear };

/// First: return the first match in visit order. Smallest: visit every
/// candidate and return the match with the fewest zone members.
enum class MatchPolicy { First, Smallest };

struct ReconstructionConfig {
  std::size_t small_threshold = 1000;
  std::size_t small_interval = 100;
  double growth_factor = 0.10;
  double oci_fraction = 0.80;

  void validate() const {
    if (small_threshold == 0 || small_interval == 0) {
      throw std::invalid_argument("rebuild threshold and interval must be positive");
    }
    if (!(growth_factor > 0.0)) throw std::invalid_argument("growth factor must be positive");
    if (!(oci_fraction > 0.0 && oci_fraction <= 1.0)) {
      throw std::invalid_argument("OCI fraction must be in (0, 1]");
    }
  }
};

struct TableStats {
  std::uint64_t entries = 0;
  std::uint64_t lookups = 0;
  std::uint64_t hits = 0;
  std::uint64_t node_visits = 0;
  std::uint64_t list_compares = 0;
  std::uint64_t rebuild_count = 0;
  /// Smallest-match mode: hits whose returned pattern differs from the first match.
  std::uint64_t smaller_hits = 0;
  std::uint64_t lookup_time_ns = 0;

  /// Traversing cost: tree node visits plus chain entries compared.
  std::uint64_t cost() const { return node_visits + list_compares; }
  double lookup_time_ms() const { return static_cast<double>(lookup_time_ns) / 1e6; }
};

/// Global stamp at the last failed lookup of one queried position.
struct SearchStamp {
  std::uint64_t value = 0;
};

enum class Maintenance { NotDue, Unchanged, Rebuilt };

struct AcceptAll {
  constexpr bool operator()(const ZonePattern&) const { return true; }
};

/// Per-lookup counters, overwritten by each lookup.
struct LookupTrace {
  std::uint64_t node_visits = 0;
  std::uint64_t list_compares = 0;
  bool hit = false;
};

/// Zone-pattern table: a radix tree over the OCI with B/W/E/N branches and
/// newest-first pattern chains at the leaves, or a plain newest-first list.
///
/// One structure per player to move. Patterns are owned by an append-only
/// store; a pattern's stamp is its 1-based insertion rank, so the store index
/// is stamp - 1. With timestamps on, a node's stamp is the newest pattern
/// below it and a lookup skips any subtree no newer than the caller's
/// SearchStamp.
///
/// Single-writer: no internal locking.
class PatternTable {
 public:
  explicit PatternTable(int side, TableMode mode = TableMode::Radix, bool timestamps = true,
                        ReconstructionConfig config = {}, MatchPolicy match = MatchPolicy::First)
      : side_(side), mode_(mode), timestamps_(timestamps), match_(match), config_(config) {
    if (side < 1 || side > kMaxSide) throw std::invalid_argument("bad board side");
    config_.validate();
    tally_.assign(static_cast<std::size_t>(side * side), 0);
  }

  int side() const { return side_; }
  TableMode mode() const { return mode_; }
  bool timestamps() const { return timestamps_; }
  MatchPolicy match_policy() const { return match_; }
  const ReconstructionConfig& config() const { return config_; }
  const Oci& oci() const { return oci_; }
  std::uint64_t global_stamp() const { return store_.size(); }
  std::size_t size() const { return store_.size(); }
  std::span<const std::uint64_t> tally() const { return tally_; }
  std::span<const ZonePattern> patterns() const { return store_; }
  const TableStats& stats() const { return stats_; }
  const LookupTrace& last_lookup() const { return last_; }
  std::size_t last_rebuild_size() const { return last_rebuild_size_; }

  /// True once a non-empty OCI is in force; before that the radix structure
  /// is a single leaf, i.e. a linear list.
  bool is_tree() const { return mode_ == TableMode::Radix && !oci_.empty(); }

  std::size_t node_count(Color player) const { return trees_[slot(player)].nodes.size(); }
  std::size_t node_count() const { return trees_[0].nodes.size() + trees_[1].nodes.size(); }

  /// Tree nodes in radix mode, list length in linear mode.
  std::size_t structure_size(Color player) const {
    return mode_ == TableMode::Linear ? lists_[slot(player)].size() : node_count(player);
  }

  /// Test hook: when on, every timestamp skip is re-checked by a full scan of
  /// what was skipped; a match found there counts as a violation.
  void set_skip_audit(bool on) { audit_ = on; }
  std::uint64_t skip_violations() const { return skip_violations_; }

  Maintenance insert(ZonePattern phi) {
    if (phi.side() != side_) throw std::invalid_argument("pattern side does not match table");
    phi.stamp = store_.size() + 1;
    phi.zone.members().for_each([&](int i) { ++tally_[static_cast<std::size_t>(i)]; });
    store_.push_back(std::move(phi));
    ++stats_.entries;

    const auto id = static_cast<std::uint32_t>(store_.size() - 1);
    if (mode_ == TableMode::Linear) {
      lists_[slot(store_.back().player)].push_back(id);
      return Maintenance::NotDue;
    }
    tree_insert(id);
    return maintenance();
  }

  /// Returns the matching pattern (valid until the next insert) or nullptr.
  ///
  /// Depth-first: at depth d the branch for the position's content at I_d is
  /// tried before N; leaf chains are scanned newest first. `accept` narrows
  /// the match relation; timestamp skipping stays exact as long as the same
  /// `accept` is used with the same SearchStamp.
  template <typename Accept = AcceptAll>
  const ZonePattern* lookup(const Position& p, SearchStamp& s, Accept&& accept = {}) {
    if (p.side() != side_) throw std::invalid_argument("position side does not match table");
    const auto start = std::chrono::steady_clock::now();

    Scan<Accept> scan{p, s.value, accept};
    if (mode_ == TableMode::Linear) {
      scan_chain(lists_[slot(p.to_move())], scan);
    } else {
      const Tree& tree = trees_[slot(p.to_move())];
      if (!tree.nodes.empty()) visit(tree, 0, 0, scan);
    }

    ++stats_.lookups;
    stats_.node_visits += scan.node_visits;
    stats_.list_compares += scan.compares;
    last_ = {scan.node_visits, scan.compares, scan.best != nullptr};
    if (scan.best != nullptr) {
      ++stats_.hits;
      if (scan.best != scan.first) ++stats_.smaller_hits;
    } else if (timestamps_) {
      s.value = global_stamp();
    }
    stats_.lookup_time_ns += static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() -
                                                             start)
            .count());
    return scan.best;
  }

  bool rebuild_due() const {
    const std::size_t n = store_.size();
    if (n == 0) return false;
    if (n <= config_.small_threshold) return n % config_.small_interval == 0;
    const double grown = static_cast<double>(last_rebuild_size_) * config_.growth_factor;
    const auto step = static_cast<std::size_t>(std::ceil(grown - 1e-9));
    return n >= last_rebuild_size_ + step;
  }

  /// Rebuild schedule check, run after every insert in radix mode.
  Maintenance maintenance() {
    if (mode_ == TableMode::Linear || !rebuild_due()) return Maintenance::NotDue;
    Oci next = compute_oci(tally_, config_.oci_fraction, side_);
    if (next == oci_) {
      last_rebuild_size_ = store_.size();
      return Maintenance::Unchanged;
    }
    reconstruct(next);
    return Maintenance::Rebuilt;
  }

  /// Rebuilds both trees on `oci`, reinserting patterns in stamp order with
  /// their stamps preserved.
  void reconstruct(const Oci& oci) {
    for (Point pt : oci.points()) {
      if (pt.index >= side_ * side_) throw std::invalid_argument("OCI outside the board");
    }
    oci_ = oci;
    last_rebuild_size_ = store_.size();
    ++stats_.rebuild_count;
    if (mode_ == TableMode::Linear) return;
    trees_[0] = Tree{};
    trees_[1] = Tree{};
    for (std::uint32_t id = 0; id < store_.size(); ++id) tree_insert(id);
  }

  /// Radix key of a stored pattern under the current OCI.
  PatternKey key_of(const ZonePattern& phi) const { return encode_pattern_key(phi, oci_); }

  /// Empty when the structural laws hold; otherwise a description of the
  /// first violation found. Used by tests.
  std::string check_invariants() const {
    for (std::size_t i = 0; i < store_.size(); ++i) {
      if (store_[i].stamp != i + 1) return "store stamp mismatch at " + std::to_string(i);
    }
    std::size_t seen = 0;
    if (mode_ == TableMode::Linear) {
      for (const auto& list : lists_) {
        for (std::size_t i = 1; i < list.size(); ++i) {
          if (list[i - 1] >= list[i]) return "linear list out of stamp order";
        }
        seen += list.size();
      }
    } else {
      for (int t = 0; t < 2; ++t) {
        const Tree& tree = trees_[t];
        if (tree.nodes.empty()) continue;
        std::string err;
        PatternKey path;
        check_node(tree, 0, path, t, seen, err);
        if (!err.empty()) return err;
      }
    }
    if (seen != store_.size()) return "stored pattern count mismatch";
    return {};
  }

 private:
  struct Node {
    std::array<std::int32_t, 4> child{-1, -1, -1, -1};
    std::uint64_t stamp = 0;
    std::int32_t chain = -1;
  };

  struct Tree {
    std::vector<Node> nodes;
    /// Pattern ids in ascending stamp order; the head (newest) is back().
    std::vector<std::vector<std::uint32_t>> chains;
  };

  template <typename Accept>
  struct Scan {
    const Position& pos;
    std::uint64_t since;
    Accept& accept;
    const ZonePattern* best = nullptr;
    const ZonePattern* first = nullptr;
    std::uint64_t node_visits = 0;
    std::uint64_t compares = 0;
  };

  static std::size_t slot(Color player) { return player == Color::White ? 1 : 0; }

  void tree_insert(std::uint32_t id) {
    const ZonePattern& phi = store_[id];
    Tree& tree = trees_[slot(phi.player)];
    if (tree.nodes.empty()) tree.nodes.emplace_back();
    std::size_t cur = 0;
    tree.nodes[cur].stamp = std::max(tree.nodes[cur].stamp, phi.stamp);
    for (Point at : oci_.points()) {
      const auto sym = static_cast<std::size_t>(pattern_symbol(phi, at));
      std::int32_t next = tree.nodes[cur].child[sym];
      if (next < 0) {
        next = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes[cur].child[sym] = next;
        tree.nodes.emplace_back();
      }
      cur = static_cast<std::size_t>(next);
      tree.nodes[cur].stamp = std::max(tree.nodes[cur].stamp, phi.stamp);
    }
    if (tree.nodes[cur].chain < 0) {
      tree.nodes[cur].chain = static_cast<std::int32_t>(tree.chains.size());
      tree.chains.emplace_back();
    }
    tree.chains[static_cast<std::size_t>(tree.nodes[cur].chain)].push_back(id);
  }

  template <typename Accept>
  bool consider(const ZonePattern& phi, Scan<Accept>& scan) const {
    if (!matches(scan.pos, phi) || !scan.accept(phi)) return false;
    if (scan.first == nullptr) scan.first = &phi;
    if (scan.best == nullptr || phi.zone.size() < scan.best->zone.size()) scan.best = &phi;
    return match_ == MatchPolicy::First;
  }

  /// Scans newest to oldest; true when the scan should stop the lookup.
  template <typename Accept>
  bool scan_chain(const std::vector<std::uint32_t>& chain, Scan<Accept>& scan) {
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const ZonePattern& phi = store_[*it];
      if (timestamps_ && phi.stamp < scan.since) {
        if (audit_) audit_chain_tail(it, chain.rend(), scan);
        return false;
      }
      ++scan.compares;
      if (consider(phi, scan)) return true;
    }
    return false;
  }

  template <typename Accept>
  bool visit(const Tree& tree, std::size_t node, std::size_t depth, Scan<Accept>& scan) {
    ++scan.node_visits;
    const Node& n = tree.nodes[node];
    if (timestamps_ && scan.since >= n.stamp) {
      if (audit_) audit_subtree(tree, node, scan);
      return false;
    }
    if (depth == oci_.size()) {
      return n.chain >= 0 && scan_chain(tree.chains[static_cast<std::size_t>(n.chain)], scan);
    }
    const auto sym = static_cast<std::size_t>(symbol_of(scan.pos.at(oci_[depth])));
    if (n.child[sym] >= 0 &&
        visit(tree, static_cast<std::size_t>(n.child[sym]), depth + 1, scan)) {
      return true;
    }
    constexpr auto kN = static_cast<std::size_t>(Symbol::N);
    return n.child[kN] >= 0 && visit(tree, static_cast<std::size_t>(n.child[kN]), depth + 1, scan);
  }

  template <typename Accept, typename It>
  void audit_chain_tail(It it, It end, Scan<Accept>& scan) {
    for (; it != end; ++it) {
      const ZonePattern& phi = store_[*it];
      if (matches(scan.pos, phi) && scan.accept(phi)) ++skip_violations_;
    }
  }

  template <typename Accept>
  void audit_subtree(const Tree& tree, std::size_t node, Scan<Accept>& scan) {
    const Node& n = tree.nodes[node];
    if (n.chain >= 0) {
      const auto& chain = tree.chains[static_cast<std::size_t>(n.chain)];
      audit_chain_tail(chain.rbegin(), chain.rend(), scan);
    }
    for (std::int32_t c : n.child) {
      if (c >= 0) audit_subtree(tree, static_cast<std::size_t>(c), scan);
    }
  }

  std::uint64_t check_node(const Tree& tree, std::size_t node, PatternKey& path, int t,
                           std::size_t& seen, std::string& err) const {
    const Node& n = tree.nodes[node];
    std::uint64_t newest = 0;
    if (path.size() == oci_.size()) {
      if (n.chain < 0) {
        err = "leaf without chain";
        return 0;
      }
      const auto& chain = tree.chains[static_cast<std::size_t>(n.chain)];
      for (std::size_t i = 0; i < chain.size(); ++i) {
        const ZonePattern& phi = store_[chain[i]];
        if (i > 0 && store_[chain[i - 1]].stamp >= phi.stamp) err = "chain not stamp ordered";
        if (static_cast<int>(slot(phi.player)) != t) err = "pattern in wrong player tree";
        if (key_of(phi) != path) err = "pattern stored under the wrong key";
        newest = std::max(newest, phi.stamp);
      }
      seen += chain.size();
    } else {
      for (std::size_t sym = 0; sym < 4; ++sym) {
        if (n.child[sym] < 0) continue;
        path.push_back(static_cast<Symbol>(sym));
        newest = std::max(
            newest, check_node(tree, static_cast<std::size_t>(n.child[sym]), path, t, seen, err));
        path.pop_back();
      }
    }
    if (n.stamp != newest && err.empty()) {
      err = "node stamp " + std::to_string(n.stamp) + " != newest below " + std::to_string(newest);
    }
    return newest;
  }

  int side_;
  TableMode mode_;
  bool timestamps_;
  MatchPolicy match_;
  ReconstructionConfig config_;
  Oci oci_;
  std::vector<ZonePattern> store_;
  std::vector<std::uint64_t> tally_;
  std::array<std::vector<std::uint32_t>, 2> lists_;
  std::array<Tree, 2> trees_;
  std::size_t last_rebuild_size_ = 0;
  TableStats stats_;
  LookupTrace last_;
  bool audit_ = false;
  std::uint64_t skip_violations_ = 0;
};

}  // namespace rzt
