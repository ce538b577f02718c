#pragma once

#include <cstdint>

#include "fsroute/topology.hpp"

namespace fsroute {

struct BoundsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Minimum FS edge count over any single-link-failure-avoiding FS whose
// primary is the k-hop shortest path: 2k+1 on weighted graphs, ceil(5k/2)
// on unweighted ones.
std::size_t lower_bound_edges(std::size_t primary_hops, bool weighted);

struct BoundResult {
  std::size_t primary_hops = 0;
  std::size_t weighted_bound = 0;
  std::size_t unweighted_bound = 0;
};
BoundResult bound_result(std::size_t primary_hops);

struct WitnessGraph {
  Topology topo;
  NodeId s = kNoNode;
  NodeId d = kNoNode;
};

// Spine v_0..v_k plus a hub: hub edges weighted so each primary node's
// shortest alternate is the two-hop route through the hub. The constructed
// FS has exactly 2k+1 edges.
WitnessGraph witness_weighted(std::size_t k);

// Unit-weight chain of two-hop blocks, each with a hub attached to three
// consecutive spine nodes (two for the terminal block of odd k). The
// constructed FS has exactly ceil(5k/2) edges.
WitnessGraph witness_unweighted(std::size_t k);

}  // namespace fsroute
