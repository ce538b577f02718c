#include "fsroute/bounds.hpp"

namespace fsroute {

std::size_t lower_bound_edges(std::size_t primary_hops, bool weighted) {
  if (primary_hops == 0) throw BoundsError("primary hop count must be at least 1");
  if (weighted) return 2 * primary_hops + 1;
  return (5 * primary_hops + 1) / 2;
}

BoundResult bound_result(std::size_t primary_hops) {
  return BoundResult{primary_hops, lower_bound_edges(primary_hops, true),
                     lower_bound_edges(primary_hops, false)};
}

namespace {

void add_undirected(std::vector<std::tuple<NodeId, NodeId, double>>& links, NodeId u, NodeId v,
                    double w) {
  links.emplace_back(u, v, w);
  links.emplace_back(v, u, w);
}

}  // namespace

WitnessGraph witness_weighted(std::size_t k) {
  if (k == 0) throw BoundsError("k must be at least 1");
  std::vector<std::tuple<NodeId, NodeId, double>> links;
  const NodeId hub = static_cast<NodeId>(k + 1);
  for (std::size_t i = 0; i < k; ++i) {
    add_undirected(links, static_cast<NodeId>(i), static_cast<NodeId>(i + 1), 1.0);
    // Weight k-i makes the hub route the unique shortest alternate at v_i.
    add_undirected(links, static_cast<NodeId>(i), hub, static_cast<double>(k - i));
  }
  // Unit weight (not zero) keeps the spine strictly shorter than any route
  // through the hub.
  add_undirected(links, hub, static_cast<NodeId>(k), 1.0);
  WitnessGraph w;
  w.topo = Topology::from_links(k + 2, links, true);
  w.s = 0;
  w.d = static_cast<NodeId>(k);
  return w;
}

WitnessGraph witness_unweighted(std::size_t k) {
  if (k == 0) throw BoundsError("k must be at least 1");
  std::vector<std::tuple<NodeId, NodeId, double>> links;
  for (std::size_t i = 0; i < k; ++i) {
    add_undirected(links, static_cast<NodeId>(i), static_cast<NodeId>(i + 1), 1.0);
  }
  NodeId next_hub = static_cast<NodeId>(k + 1);
  std::size_t hop = 0;
  while (hop < k) {
    NodeId hub = next_hub++;
    if (hop + 2 <= k) {
      // Full block: hub spans spine nodes hop, hop+1, hop+2.
      add_undirected(links, static_cast<NodeId>(hop), hub, 1.0);
      add_undirected(links, static_cast<NodeId>(hop + 1), hub, 1.0);
      add_undirected(links, static_cast<NodeId>(hop + 2), hub, 1.0);
      hop += 2;
    } else {
      // Terminal block for odd k: hub spans the last two spine nodes.
      add_undirected(links, static_cast<NodeId>(hop), hub, 1.0);
      add_undirected(links, static_cast<NodeId>(hop + 1), hub, 1.0);
      hop += 1;
    }
  }
  WitnessGraph w;
  w.topo = Topology::from_links(0, links, false);
  w.s = 0;
  w.d = static_cast<NodeId>(k);
  return w;
}

}  // namespace fsroute
