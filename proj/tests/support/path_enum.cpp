#include "support/path_enum.hpp"

#include <algorithm>

namespace fsroute::testing {

namespace {

bool path_less(const EnumPath& a, const EnumPath& b) {
  if (a.latency != b.latency) return a.latency < b.latency;
  if (a.hops != b.hops) return a.hops < b.hops;
  return a.nodes < b.nodes;
}

void dfs(const Topology& topo, NodeId d, const Removed& removed, std::vector<NodeId>& stack,
         std::vector<std::uint8_t>& visited, double latency,
         const std::function<void(const EnumPath&)>& fn) {
  NodeId u = stack.back();
  if (u == d) {
    fn(EnumPath{stack, latency, stack.size() - 1});
    return;
  }
  for (const auto& e : topo.out_edges(u)) {
    if (visited[e.dst] || removed.node_removed(e.dst) || removed.link_removed(u, e.dst)) continue;
    visited[e.dst] = 1;
    stack.push_back(e.dst);
    dfs(topo, d, removed, stack, visited, latency + e.latency, fn);
    stack.pop_back();
    visited[e.dst] = 0;
  }
}

}  // namespace

void for_each_simple_path(const Topology& topo, NodeId s, NodeId d, const Removed& removed,
                          const std::function<void(const EnumPath&)>& fn) {
  topo.require_node(s);
  topo.require_node(d);
  if (removed.node_removed(s) || removed.node_removed(d)) return;
  std::vector<NodeId> stack{s};
  std::vector<std::uint8_t> visited(topo.node_count(), 0);
  visited[s] = 1;
  dfs(topo, d, removed, stack, visited, 0.0, fn);
}

std::optional<EnumPath> enum_best_path(const Topology& topo, NodeId s, NodeId d,
                                       const Removed& removed) {
  std::optional<EnumPath> best;
  for_each_simple_path(topo, s, d, removed, [&](const EnumPath& p) {
    if (!best || path_less(p, *best)) best = p;
  });
  return best;
}

std::vector<EnumPath> enum_all_paths(const Topology& topo, NodeId s, NodeId d,
                                     const Removed& removed, std::size_t cap) {
  std::vector<EnumPath> paths;
  for_each_simple_path(topo, s, d, removed, [&](const EnumPath& p) { paths.push_back(p); });
  std::sort(paths.begin(), paths.end(), path_less);
  if (paths.size() > cap) paths.resize(cap);
  return paths;
}

}  // namespace fsroute::testing
