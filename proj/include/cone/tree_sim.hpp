#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <variant>
#include <vector>

#include "cone/environment.hpp"
#include "cone/graph.hpp"
#include "cone/radius_dist.hpp"
#include "cone/rng.hpp"
#include "cone/stats.hpp"

namespace cone {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

class NodeCapExceeded : public std::runtime_error {
 public:
  NodeCapExceeded() : std::runtime_error("tree arena node cap exceeded") {}
};

/// Lazily materialized T_d or T_d^+ rooted at the origin (node 0).
///
/// Children of a vertex are allocated together as one contiguous block the
/// first time anything walks below it. Every vertex carries a key derived
/// from its path from the origin, so two arenas agree on vertex identity
/// regardless of materialization order.
class TreeArena {
 public:
  TreeArena(Graph graph, int d, std::size_t node_cap);

  /// Drops everything but the origin; keeps the allocation.
  void reset();

  [[nodiscard]] Graph graph() const { return graph_; }
  [[nodiscard]] int d() const { return d_; }
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] std::size_t node_cap() const { return node_cap_; }
  [[nodiscard]] std::size_t informed_count() const { return informed_; }

  static constexpr NodeId origin() { return 0; }
  [[nodiscard]] NodeId parent(NodeId v) const { return nodes_[v].parent; }
  [[nodiscard]] std::uint32_t depth(NodeId v) const { return nodes_[v].depth; }
  [[nodiscard]] bool informed(NodeId v) const { return nodes_[v].informed; }
  [[nodiscard]] std::uint64_t key(NodeId v) const { return nodes_[v].key; }

  /// d + 1 for the origin of T_d, d otherwise.
  [[nodiscard]] int child_count(NodeId v) const {
    return (v == origin() && graph_ == Graph::Td) ? d_ + 1 : d_;
  }
  [[nodiscard]] bool has_children(NodeId v) const {
    return nodes_[v].first_child != kNoNode;
  }
  /// Requires has_children(v).
  [[nodiscard]] NodeId child(NodeId v, int slot) const {
    return nodes_[v].first_child + static_cast<NodeId>(slot);
  }

  /// Allocates v's child block if absent. False when that would exceed the cap.
  bool materialize_children(NodeId v);
  /// Marks v informed; returns false if it already was.
  bool inform(NodeId v);

  /// Tree-path length between two materialized vertices.
  [[nodiscard]] std::size_t distance(NodeId a, NodeId b) const;

 private:
  struct Node {
    NodeId parent;
    NodeId first_child;
    std::uint32_t depth;
    bool informed;
    std::uint64_t key;
  };

  Graph graph_;
  int d_;
  std::size_t node_cap_;
  std::size_t informed_ = 0;
  std::vector<Node> nodes_;
};

/// Informs every vertex within graph distance r of u (the ball B_u), walking
/// through the parent as well as the children. Appends the vertices that were
/// not informed before to `out`. Returns false if the node cap was hit, in
/// which case `out` holds the partial expansion.
bool expand_ball_into(TreeArena& arena, NodeId u, long r,
                      std::vector<NodeId>& out,
                      std::vector<NodeId>& scratch);

/// Newly informed vertices of B_u. Throws NodeCapExceeded.
std::vector<NodeId> expand_ball(TreeArena& arena, NodeId u, long r);

/// Finite stand-in for the event |I| = infinity.
struct StopPolicy {
  long depth_target = 40;                  // L
  long generation_cap = 160;               // G
  std::size_t node_cap = std::size_t{1} << 14;  // N

  /// L with G = 4 L and the default node cap.
  static StopPolicy for_depth(long depth) {
    return {depth, 4 * depth, std::size_t{1} << 14};
  }
  /// Throws std::invalid_argument unless L, G, N >= 1.
  void validate() const;
};

enum class Outcome { ReachedDepth, FrontierDied, CapHit };

std::string_view to_string(Outcome o);

struct EpisodeResult {
  Outcome outcome = Outcome::FrontierDied;
  long generations_run = 0;
  std::size_t informed_count = 0;
  long max_depth = 0;
};

/// Either one law for every vertex or a depth-indexed environment.
using RadiusSource = std::variant<RadiusDistribution, HeteroEnvironment>;

const RadiusDistribution& radius_law_at(const RadiusSource& source,
                                        std::size_t depth);

/// Uniform in [0, 1) attached to a vertex key under a given seed. Lets two
/// runs share radii vertex by vertex.
inline double keyed_uniform(std::uint64_t seed, std::uint64_t key) {
  return static_cast<double>(mix64(seed ^ mix64(key)) >> 11) * 0x1.0p-53;
}

/// Reusable per-worker state for running many episodes on one configuration.
class EpisodeRunner {
 public:
  EpisodeRunner(Graph graph, int d, RadiusSource source, StopPolicy policy);

  /// One episode; radii are drawn from `rng` at the moment each vertex spreads.
  EpisodeResult run(Rng& rng);

  /// One episode with radii supplied by `radius_of(arena, vertex)`.
  template <class RadiusFn>
  EpisodeResult run_with(RadiusFn&& radius_of);

  [[nodiscard]] const TreeArena& arena() const { return arena_; }
  [[nodiscard]] const RadiusSource& source() const { return source_; }

 private:
  TreeArena arena_;
  RadiusSource source_;
  StopPolicy policy_;
  std::vector<NodeId> frontier_;
  std::vector<NodeId> next_;
  std::vector<NodeId> scratch_;
};

template <class RadiusFn>
EpisodeResult EpisodeRunner::run_with(RadiusFn&& radius_of) {
  arena_.reset();
  arena_.inform(TreeArena::origin());
  frontier_.assign(1, TreeArena::origin());
  EpisodeResult result;
  auto finish = [&](Outcome o) {
    result.outcome = o;
    result.informed_count = arena_.informed_count();
    return result;
  };
  // I_{n+1} is I_n plus the balls of the current frontier; balls of older
  // vertices were already added when they spread.
  for (;;) {
    if (result.max_depth >= policy_.depth_target) {
      return finish(Outcome::ReachedDepth);
    }
    if (frontier_.empty()) return finish(Outcome::FrontierDied);
    if (result.generations_run >= policy_.generation_cap) {
      return finish(Outcome::CapHit);
    }
    next_.clear();
    ++result.generations_run;
    for (NodeId u : frontier_) {
      const long r = radius_of(static_cast<const TreeArena&>(arena_), u);
      const std::size_t before = next_.size();
      const bool ok = expand_ball_into(arena_, u, r, next_, scratch_);
      for (std::size_t i = before; i < next_.size(); ++i) {
        const long depth = arena_.depth(next_[i]);
        if (depth > result.max_depth) result.max_depth = depth;
      }
      if (!ok) return finish(Outcome::CapHit);
    }
    frontier_.swap(next_);
  }
}

EpisodeResult run_episode(Graph graph, int d, const RadiusSource& source,
                          const StopPolicy& policy, Rng& rng);

struct SimulationConfig {
  Graph graph = Graph::Td;
  int d = 2;
  RadiusSource source = RadiusDistribution::bernoulli(0.5);
  StopPolicy policy;
  std::uint64_t n_runs = 10'000;
  std::uint64_t master_seed = 1;
  int threads = 0;  // 0: OpenMP default
};

struct SurvivalEstimate {
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t n_runs = 0;
  std::uint64_t reached_depth = 0;
  std::uint64_t frontier_died = 0;
  /// Counted as survivals in `point`.
  std::uint64_t cap_hits = 0;

  friend bool operator==(const SurvivalEstimate&,
                         const SurvivalEstimate&) = default;
};

/// Survival frequency over n_runs episodes with a 95% Wilson interval.
/// Episode i uses Rng::for_episode(master_seed, i), so the result does not
/// depend on the thread count. Episodes run on an OpenMP worker pool.
SurvivalEstimate estimate_survival(const SimulationConfig& config);

/// Single-threaded reference for estimate_survival; same result bit for bit.
SurvivalEstimate estimate_survival_serial(const SimulationConfig& config);

/// Starts the process at a single vertex u at depth `start_depth` of T_d^+,
/// restricted to u's subtree, and reports whether the leftmost descendant at
/// depth start_depth + n is informed within n generations.
bool run_crossing_episode(const RadiusSource& source, int d,
                          std::size_t start_depth, long n, Rng& rng);

/// Frequency of run_crossing_episode over n_runs seeded episodes.
ProportionInterval estimate_crossing(const RadiusSource& source, int d,
                                     std::size_t start_depth, long n,
                                     std::uint64_t n_runs,
                                     std::uint64_t master_seed,
                                     int threads = 0);

}  // namespace cone
