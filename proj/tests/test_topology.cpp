#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "fsroute/bounds.hpp"
#include "fsroute/topology.hpp"
#include "support/path_enum.hpp"
#include "support/random_graph.hpp"
#include "support/temp_file.hpp"

using namespace fsroute;
using namespace fsroute::testing;

TEST_CASE("minimal triangle edge list") {
  TempFile f("0 1\n1 2\n0 2\n");
  Topology topo = load_topology(f.path());
  CHECK(topo.node_count() == 3);
  CHECK(topo.link_count() == 3);
  CHECK_FALSE(topo.weighted());
  CHECK(topo.link_latency(0, 1) == 1.0);
  CHECK(topo.link_latency(0, 2) == 1.0);
}

TEST_CASE("comments, blank lines and latency column") {
  TempFile f("# a comment\n\n0 1 2.5   # trailing comment\n1 0 2.5\n1 2\n");
  Topology topo = load_topology(f.path());
  CHECK(topo.weighted());
  CHECK(topo.link_latency(0, 1) == 2.5);
  CHECK(topo.link_latency(1, 2) == 1.0);  // missing column defaults to 1
}

TEST_CASE("loader rejects degenerate input") {
  SUBCASE("self-loop") {
    std::istringstream in("0 1\n0 0\n");
    CHECK_THROWS_WITH_AS(parse_topology(in, "x"), doctest::Contains("x:2"), TopologyError);
  }
  SUBCASE("duplicate ordered link") {
    std::istringstream in("0 1\n0 1 3\n");
    CHECK_THROWS_WITH_AS(parse_topology(in, "x"), doctest::Contains("duplicate"), TopologyError);
  }
  SUBCASE("bad id") {
    std::istringstream in("0 1\nfoo 2\n");
    CHECK_THROWS_WITH_AS(parse_topology(in, "x"), doctest::Contains("x:2"), TopologyError);
  }
  SUBCASE("missing column") {
    std::istringstream in("5\n");
    CHECK_THROWS_AS(parse_topology(in, "x"), TopologyError);
  }
  SUBCASE("negative latency") {
    std::istringstream in("0 1 -2\n");
    CHECK_THROWS_AS(parse_topology(in, "x"), TopologyError);
  }
}

TEST_CASE("label widths follow ceil(log2(degree))") {
  CHECK(label_width_for_degree(0) == 0);
  CHECK(label_width_for_degree(1) == 0);
  CHECK(label_width_for_degree(2) == 1);
  CHECK(label_width_for_degree(3) == 2);
  CHECK(label_width_for_degree(4) == 2);
  CHECK(label_width_for_degree(5) == 3);
  CHECK(label_width_for_degree(8) == 3);
  CHECK(label_width_for_degree(9) == 4);
}

TEST_CASE("label assignment is the sorted-neighbor index") {
  // Node 0 with out-degree 5: 3-bit labels 000..100 ordered by destination.
  std::vector<std::tuple<NodeId, NodeId, double>> links;
  for (NodeId v : {7, 3, 9, 1, 5}) links.emplace_back(0, v, 1.0);
  links.emplace_back(7, 0, 1.0);  // node 7 keeps out-degree 1
  Topology topo = Topology::from_links(10, links, false);
  CHECK(topo.label_width(0) == 3);
  CHECK(topo.label_of(0, 1) == Label{0, 3});
  CHECK(topo.label_of(0, 3) == Label{1, 3});
  CHECK(topo.label_of(0, 5) == Label{2, 3});
  CHECK(topo.label_of(0, 7) == Label{3, 3});
  CHECK(topo.label_of(0, 9) == Label{4, 3});
  CHECK(topo.neighbor_by_label(0, 4) == 9);
  CHECK_FALSE(topo.neighbor_by_label(0, 5).has_value());

  // Degree 1: the empty label.
  CHECK(topo.label_width(7) == 0);
  CHECK(topo.label_of(7, 0) == Label{0, 0});

  // Degree 2 gets labels 0 and 1.
  Topology two = Topology::from_links(3, {{0, 1, 1.0}, {0, 2, 1.0}}, false);
  CHECK(two.label_of(0, 1) == Label{0, 1});
  CHECK(two.label_of(0, 2) == Label{1, 1});
}

TEST_CASE("triangle shortest path and forced detour") {
  Topology topo = Topology::from_links(
      3, {{0, 1, 1.0}, {1, 0, 1.0}, {1, 2, 1.0}, {2, 1, 1.0}, {0, 2, 1.0}, {2, 0, 1.0}}, false);
  auto direct = shortest_path(topo, 0, 2);
  REQUIRE(direct.has_value());
  CHECK(direct->nodes == std::vector<NodeId>{0, 2});
  CHECK(direct->latency == 1.0);

  auto detour = shortest_path(topo, 0, 2, Removed::link(0, 2));
  REQUIRE(detour.has_value());
  CHECK(detour->nodes == std::vector<NodeId>{0, 1, 2});
  CHECK(detour->latency == 2.0);
  CHECK(detour->hops == 2);
}

TEST_CASE("weighted witness spine is strictly shortest") {
  // Hub-route weights make the k-hop spine the unique minimum.
  WitnessGraph w = witness_weighted(4);
  auto path = shortest_path(w.topo, w.s, w.d);
  REQUIRE(path.has_value());
  CHECK(path->nodes == std::vector<NodeId>{0, 1, 2, 3, 4});
  CHECK(path->latency == 4.0);
  auto oracle = enum_best_path(w.topo, w.s, w.d);
  REQUIRE(oracle.has_value());
  CHECK(oracle->nodes == path->nodes);
  CHECK(oracle->latency == path->latency);
}

TEST_CASE("unknown node ids are rejected") {
  Topology topo = Topology::from_links(2, {{0, 1, 1.0}}, false);
  CHECK_THROWS_AS(shortest_path(topo, 0, 9), TopologyError);
  CHECK_THROWS_AS(topo.label_of(5, 0), TopologyError);
}

TEST_CASE("tie-breaking prefers fewer hops then smaller node sequence") {
  // 0..3 via {0,1,3} (2 hops) and {0,2,3} (2 hops): lexicographic pick.
  Topology topo = Topology::from_links(4,
                                       {{0, 1, 1.0}, {1, 3, 1.0}, {0, 2, 1.0}, {2, 3, 1.0},
                                        {0, 3, 2.0}},
                                       true);
  auto path = shortest_path(topo, 0, 3);
  REQUIRE(path.has_value());
  // Latency ties at 2.0 for all three routes; the direct edge has fewer hops.
  CHECK(path->nodes == std::vector<NodeId>{0, 3});

  Topology no_direct =
      Topology::from_links(4, {{0, 1, 1.0}, {1, 3, 1.0}, {0, 2, 1.0}, {2, 3, 1.0}}, true);
  auto tie = shortest_path(no_direct, 0, 3);
  REQUIRE(tie.has_value());
  CHECK(tie->nodes == std::vector<NodeId>{0, 1, 3});
}

TEST_CASE("dijkstra agrees with exhaustive enumeration including tie-breaks") {
  std::mt19937_64 rng(0xfeedbeef);
  for (int g = 0; g < 12; ++g) {
    std::size_t n = 5 + g % 4;
    Topology topo = g % 2 ? random_biconnected(rng, n, 3, true)
                          : random_connected(rng, n, 2, g % 3 == 0);
    auto links = topo.all_links();
    for (NodeId s = 0; s < n; ++s) {
      for (NodeId d = 0; d < n; ++d) {
        if (s == d) continue;
        auto got = shortest_path(topo, s, d);
        auto want = enum_best_path(topo, s, d);
        REQUIRE(got.has_value() == want.has_value());
        if (got) {
          CHECK(got->latency == want->latency);
          CHECK(got->hops == want->hops);
          CHECK(got->nodes == want->nodes);
        }
        // All single-link removals.
        for (auto [u, v, w] : links) {
          Removed removed = Removed::link(u, v);
          auto got_r = shortest_path(topo, s, d, removed);
          auto want_r = enum_best_path(topo, s, d, removed);
          REQUIRE(got_r.has_value() == want_r.has_value());
          if (got_r) {
            CHECK(got_r->latency == want_r->latency);
            CHECK(got_r->nodes == want_r->nodes);
          }
        }
      }
    }
  }
}

TEST_CASE("canonical suffix property") {
  // A suffix of a canonical path is the canonical path of its own query.
  std::mt19937_64 rng(77);
  for (int g = 0; g < 10; ++g) {
    Topology topo = random_biconnected(rng, 8, 4, g % 2);
    for (NodeId s = 0; s < 8; ++s) {
      for (NodeId d = 0; d < 8; ++d) {
        if (s == d) continue;
        auto path = shortest_path(topo, s, d);
        REQUIRE(path.has_value());
        for (std::size_t i = 1; i + 1 < path->nodes.size(); ++i) {
          auto sub = shortest_path(topo, path->nodes[i], d);
          REQUIRE(sub.has_value());
          CHECK(std::vector<NodeId>(path->nodes.begin() + i, path->nodes.end()) == sub->nodes);
        }
      }
    }
  }
}

TEST_CASE("label uniqueness and width uniformity on random graphs") {
  std::mt19937_64 rng(123);
  for (int g = 0; g < 20; ++g) {
    Topology topo = random_connected(rng, 6 + g % 5, 4, g % 2);
    for (NodeId u = 0; u < topo.node_count(); ++u) {
      std::set<std::uint32_t> seen;
      for (const auto& e : topo.out_edges(u)) {
        Label l = topo.label_of(u, e.dst);
        CHECK(l.width == topo.label_width(u));
        CHECK(seen.insert(l.value).second);
        CHECK(topo.neighbor_by_label(u, l.value) == e.dst);
      }
    }
  }
}

TEST_CASE("loading the same file twice is deterministic") {
  TempFile f("0 1 3\n1 0 3\n1 2 1\n2 1 1\n0 2 5\n2 0 5\n");
  Topology a = load_topology(f.path());
  Topology b = load_topology(f.path());
  CHECK(a.all_links() == b.all_links());
  auto pa = shortest_path(a, 0, 2);
  auto pb = shortest_path(b, 0, 2);
  REQUIRE(pa.has_value());
  REQUIRE(pb.has_value());
  CHECK(pa->nodes == pb->nodes);
  CHECK(pa->latency == pb->latency);
}

TEST_CASE("biconnectivity check") {
  // Triangle: yes. Path: no. Two triangles sharing a vertex: no.
  Topology tri = Topology::from_links(
      3, {{0, 1, 1}, {1, 0, 1}, {1, 2, 1}, {2, 1, 1}, {0, 2, 1}, {2, 0, 1}}, false);
  CHECK(is_biconnected(tri));
  Topology path = Topology::from_links(3, {{0, 1, 1}, {1, 0, 1}, {1, 2, 1}, {2, 1, 1}}, false);
  CHECK_FALSE(is_biconnected(path));
  std::vector<std::tuple<NodeId, NodeId, double>> bowtie;
  for (auto [a, b] : std::vector<std::pair<NodeId, NodeId>>{{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {2, 4}}) {
    bowtie.emplace_back(a, b, 1.0);
    bowtie.emplace_back(b, a, 1.0);
  }
  CHECK_FALSE(is_biconnected(Topology::from_links(5, bowtie, false)));
}
