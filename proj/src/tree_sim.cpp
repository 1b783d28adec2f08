#include "cone/tree_sim.hpp"

#include <algorithm>
#include <string>

namespace cone {

namespace {

constexpr std::uint64_t kOriginKey = 0x5eed0f0a11c0deULL;

// Polynomial path hash; keyed_uniform() mixes it before use.
std::uint64_t child_key(std::uint64_t parent_key, int slot) {
  return parent_key * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(slot) + 1;
}

}  // namespace

TreeArena::TreeArena(Graph graph, int d, std::size_t node_cap)
    : graph_(graph), d_(d), node_cap_(node_cap) {
  if (d < 2) throw std::invalid_argument("tree arena: d must be >= 2");
  if (node_cap < 1) throw std::invalid_argument("tree arena: node cap must be >= 1");
  if (node_cap >= kNoNode) throw std::invalid_argument("tree arena: node cap too large");
  reset();
}

void TreeArena::reset() {
  nodes_.clear();
  nodes_.push_back(Node{kNoNode, kNoNode, 0, false, kOriginKey});
  informed_ = 0;
}

bool TreeArena::materialize_children(NodeId v) {
  if (nodes_[v].first_child != kNoNode) return true;
  const int count = child_count(v);
  if (nodes_.size() + static_cast<std::size_t>(count) > node_cap_) return false;
  const auto first = static_cast<NodeId>(nodes_.size());
  const std::uint32_t depth = nodes_[v].depth + 1;
  const std::uint64_t key = nodes_[v].key;
  for (int slot = 0; slot < count; ++slot) {
    nodes_.push_back(Node{v, kNoNode, depth, false, child_key(key, slot)});
  }
  nodes_[v].first_child = first;
  return true;
}

bool TreeArena::inform(NodeId v) {
  if (nodes_[v].informed) return false;
  nodes_[v].informed = true;
  ++informed_;
  return true;
}

std::size_t TreeArena::distance(NodeId a, NodeId b) const {
  std::size_t steps = 0;
  while (depth(a) > depth(b)) {
    a = parent(a);
    ++steps;
  }
  while (depth(b) > depth(a)) {
    b = parent(b);
    ++steps;
  }
  while (a != b) {
    a = parent(a);
    b = parent(b);
    steps += 2;
  }
  return steps;
}

bool expand_ball_into(TreeArena& arena, NodeId u, long r,
                      std::vector<NodeId>& out,
                      std::vector<NodeId>& scratch) {
  if (r <= 0) return true;
  if (r == 1) {
    const NodeId up = arena.parent(u);
    if (up != kNoNode && arena.inform(up)) out.push_back(up);
    if (!arena.materialize_children(u)) return false;
    const int count = arena.child_count(u);
    for (int slot = 0; slot < count; ++slot) {
      const NodeId c = arena.child(u, slot);
      if (arena.inform(c)) out.push_back(c);
    }
    return true;
  }
  // Depth-first walk; tree paths are unique, so skipping the vertex we came
  // from visits every vertex of the ball exactly once. Stack holds triples
  // (vertex, came_from, distance).
  scratch.clear();
  scratch.push_back(u);
  scratch.push_back(kNoNode);
  scratch.push_back(0);
  auto visit = [&](NodeId y, NodeId from, NodeId dist) {
    if (arena.inform(y)) out.push_back(y);
    if (static_cast<long>(dist) < r) {
      scratch.push_back(y);
      scratch.push_back(from);
      scratch.push_back(dist);
    }
  };
  while (!scratch.empty()) {
    const NodeId dist = scratch.back();
    scratch.pop_back();
    const NodeId from = scratch.back();
    scratch.pop_back();
    const NodeId x = scratch.back();
    scratch.pop_back();
    const NodeId up = arena.parent(x);
    if (up != kNoNode && up != from) visit(up, x, dist + 1);
    if (!arena.materialize_children(x)) return false;
    const int count = arena.child_count(x);
    for (int slot = 0; slot < count; ++slot) {
      const NodeId c = arena.child(x, slot);
      if (c != from) visit(c, x, dist + 1);
    }
  }
  return true;
}

std::vector<NodeId> expand_ball(TreeArena& arena, NodeId u, long r) {
  std::vector<NodeId> out;
  std::vector<NodeId> scratch;
  if (!expand_ball_into(arena, u, r, out, scratch)) throw NodeCapExceeded();
  return out;
}

void StopPolicy::validate() const {
  if (depth_target < 1 || generation_cap < 1 || node_cap < 1) {
    throw std::invalid_argument("stop policy: L, G and N must all be >= 1");
  }
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::ReachedDepth: return "ReachedDepth";
    case Outcome::FrontierDied: return "FrontierDied";
    case Outcome::CapHit: return "CapHit";
  }
  return "?";
}

const RadiusDistribution& radius_law_at(const RadiusSource& source,
                                        std::size_t depth) {
  if (const auto* dist = std::get_if<RadiusDistribution>(&source)) return *dist;
  return std::get<HeteroEnvironment>(source).at(depth);
}

EpisodeRunner::EpisodeRunner(Graph graph, int d, RadiusSource source,
                             StopPolicy policy)
    : arena_(graph, d, policy.node_cap),
      source_(std::move(source)),
      policy_(policy) {
  policy_.validate();
}

EpisodeResult EpisodeRunner::run(Rng& rng) {
  return run_with([&](const TreeArena& arena, NodeId u) {
    return sample(radius_law_at(source_, arena.depth(u)), rng);
  });
}

EpisodeResult run_episode(Graph graph, int d, const RadiusSource& source,
                          const StopPolicy& policy, Rng& rng) {
  EpisodeRunner runner(graph, d, source, policy);
  return runner.run(rng);
}

bool run_crossing_episode(const RadiusSource& source, int d,
                          std::size_t start_depth, long n, Rng& rng) {
  TreeArena arena(Graph::TdPlus, d, std::size_t{1} << 22);
  std::vector<NodeId> frontier{TreeArena::origin()};
  std::vector<NodeId> next;
  std::vector<NodeId> scratch;
  arena.inform(TreeArena::origin());
  for (long gen = 0; gen < n && !frontier.empty(); ++gen) {
    next.clear();
    for (NodeId u : frontier) {
      const long r = sample(radius_law_at(source, start_depth + arena.depth(u)), rng);
      if (!expand_ball_into(arena, u, r, next, scratch)) {
        frontier.clear();
        break;
      }
    }
    if (!frontier.empty()) frontier.swap(next);
  }
  NodeId v = TreeArena::origin();
  for (long level = 0; level < n; ++level) {
    if (!arena.has_children(v)) return false;
    v = arena.child(v, 0);
  }
  return arena.informed(v);
}

}  // namespace cone
