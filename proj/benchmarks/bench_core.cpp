#include <benchmark/benchmark.h>

#include <random>

#include "fsroute/codec_default.hpp"
#include "fsroute/codec_direct.hpp"
#include "fsroute/failsim.hpp"
#include "fsroute/forward.hpp"
#include "fsroute/fs.hpp"
#include "fsroute/topology.hpp"

namespace {

using namespace fsroute;

// Ring plus random chords, both directions, unit or integer weights.
Topology make_graph(std::size_t n, std::size_t chords, bool weighted, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::set<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    edges.insert({static_cast<NodeId>(i), static_cast<NodeId>((i + 1) % n)});
  }
  while (edges.size() < n + chords) {
    NodeId a = static_cast<NodeId>(rng() % n);
    NodeId b = static_cast<NodeId>(rng() % n);
    if (a != b) edges.insert({std::min(a, b), std::max(a, b)});
  }
  std::vector<std::tuple<NodeId, NodeId, double>> links;
  for (auto [a, b] : edges) {
    double w = weighted ? static_cast<double>(1 + rng() % 10) : 1.0;
    links.emplace_back(a, b, w);
    links.emplace_back(b, a, w);
  }
  return Topology::from_links(n, links, weighted);
}

void BM_ShortestPath(benchmark::State& state) {
  Topology topo = make_graph(state.range(0), state.range(0), true, 1);
  NodeId d = static_cast<NodeId>(state.range(0) / 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(shortest_path(topo, 0, d));
  }
}
BENCHMARK(BM_ShortestPath)->Arg(64)->Arg(256)->Arg(1024);

void BM_BuildFs(benchmark::State& state) {
  Topology topo = make_graph(state.range(0), state.range(0), true, 2);
  NodeId d = static_cast<NodeId>(state.range(0) / 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_fs(topo, 0, d));
  }
}
BENCHMARK(BM_BuildFs)->Arg(64)->Arg(256)->Arg(1024);

void BM_EncodeDefault(benchmark::State& state) {
  Topology topo = make_graph(state.range(0), state.range(0), true, 3);
  ForwardingSubgraph fs = build_fs(topo, 0, static_cast<NodeId>(state.range(0) / 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(encode_default(fs, topo));
  }
}
BENCHMARK(BM_EncodeDefault)->Arg(64)->Arg(256);

void BM_EncodeDirect(benchmark::State& state) {
  Topology topo = make_graph(state.range(0), state.range(0), true, 3);
  ForwardingSubgraph fs = build_fs(topo, 0, static_cast<NodeId>(state.range(0) / 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(encode_direct(fs, topo));
  }
}
BENCHMARK(BM_EncodeDirect)->Arg(64)->Arg(256);

void BM_ForwardWithFailure(benchmark::State& state) {
  Topology topo = make_graph(state.range(0), state.range(0), true, 4);
  NodeId d = static_cast<NodeId>(state.range(0) / 2);
  ForwardingSubgraph fs = build_fs(topo, 0, d);
  DefaultHeader header = encode_default(fs, topo);
  FailedSet failed;
  failed.fail_link(fs.nodes[fs.primary[0]].physical, fs.nodes[fs.primary[1]].physical);
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_packet(header, topo, 0, failed));
  }
}
BENCHMARK(BM_ForwardWithFailure)->Arg(64)->Arg(256);

void BM_TripleStretch(benchmark::State& state) {
  Topology topo = make_graph(64, 64, true, 5);
  auto triples = sample_triples(topo, 11, SampleCounts{8, 4, 4, 20});
  if (triples.empty()) {
    state.SkipWithError("no triples sampled");
    return;
  }
  TripleContext ctx = build_triple_context(topo, triples.front());
  TimingParams p{150.0, 50.0, 2.0, 1.0};
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(scheme_stretch(Scheme::IdealSafeguard, ctx, p, t));
    t = t < 400.0 ? t + 1.0 : 0.0;
  }
}
BENCHMARK(BM_TripleStretch);

}  // namespace

BENCHMARK_MAIN();
