#pragma once

#include <functional>
#include <random>

#include "fsroute/topology.hpp"

namespace fsroute::testing {

// Hamiltonian cycle over a random node order plus `extra_edges` random
// chords; always 2-connected for n >= 3. Weighted graphs draw symmetric
// integer latencies in [1, max_weight].
Topology random_biconnected(std::mt19937_64& rng, std::size_t n, std::size_t extra_edges,
                            bool weighted, int max_weight = 4);

// Random spanning tree plus `extra_edges` chords; connected, not necessarily
// 2-connected.
Topology random_connected(std::mt19937_64& rng, std::size_t n, std::size_t extra_edges,
                          bool weighted, int max_weight = 4);

// Every labeled simple undirected graph on n nodes (unit weights) that is
// connected. n <= 6 stays tractable.
void for_each_connected_graph(std::size_t n, const std::function<void(const Topology&)>& fn);

}  // namespace fsroute::testing
