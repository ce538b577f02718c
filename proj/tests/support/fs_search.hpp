#pragma once

#include <cstddef>
#include <optional>

#include "fsroute/fs.hpp"
#include "fsroute/topology.hpp"

namespace fsroute::testing {

struct FsSearchResult {
  std::size_t min_edges = 0;
  bool exhaustive = false;  // false when a cap truncated the search
};

// Smallest edge count over every valid single-failure FS for (s, d): the
// primary is the tie-broken shortest path and each hop's alternate ranges
// over all simple paths avoiding that hop's link. Branch-and-bound over
// alternate combinations; nullopt when some hop has no alternate at all.
std::optional<FsSearchResult> min_fs_edges(const Topology& topo, NodeId s, NodeId d,
                                           std::size_t per_hop_path_cap = 128,
                                           std::size_t node_budget = 200000);

}  // namespace fsroute::testing
