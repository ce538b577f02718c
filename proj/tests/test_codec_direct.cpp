#include <doctest.h>

#include <random>

#include "fsroute/codec_direct.hpp"
#include "fsroute/fs.hpp"
#include "support/codec_walk.hpp"
#include "support/random_graph.hpp"

using namespace fsroute;
using namespace fsroute::testing;

namespace {

Topology undirected(std::size_t n, const std::vector<std::tuple<NodeId, NodeId, double>>& edges,
                    bool weighted) {
  std::vector<std::tuple<NodeId, NodeId, double>> links;
  for (auto [a, b, w] : edges) {
    links.emplace_back(a, b, w);
    links.emplace_back(b, a, w);
  }
  return Topology::from_links(n, links, weighted);
}

Topology ring(std::size_t n) {
  std::vector<std::tuple<NodeId, NodeId, double>> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1, 1.0);
  edges.emplace_back(0, n - 1, 1.0);
  return undirected(n, edges, false);
}

}  // namespace

TEST_CASE("width codes match the table") {
  CHECK(direct_width_code_bits(10) == 1);
  CHECK(direct_width_code_bits(8) == 2);
  CHECK(direct_width_code_bits(6) == 3);
  CHECK(direct_width_code_bits(4) == 4);
  CHECK(direct_width_code_value(10) == 0b0);
  CHECK(direct_width_code_value(8) == 0b10);
  CHECK(direct_width_code_value(6) == 0b110);
  CHECK(direct_width_code_value(4) == 0b1110);
  CHECK_THROWS_AS(direct_width_code_bits(5), CodecError);
}

TEST_CASE("the NodePtrLength code is prefix-free") {
  const std::vector<std::string> codes = {"0", "10", "110", "1110"};
  for (const auto& a : codes) {
    for (const auto& b : codes) {
      if (a != b) CHECK(b.rfind(a, 0) != 0);
    }
  }
}

TEST_CASE("one-hop FS is a single ND with the zero pointer") {
  Topology pair = Topology::from_links(2, {{0, 1, 1.0}, {1, 0, 1.0}}, false);
  ForwardingSubgraph fs = build_fs(pair, 0, 1);

  DirectLayout layout;
  DirectHeader h = encode_direct(fs, pair, &layout);
  CHECK(h.ptr_width == 4);  // source ND at offset 8 fits 4 bits
  CHECK(h.current_ptr == 8);
  // ND: NumberOfSuccessors=0, 0-bit label, ContainsPtr=1, Ptr=0.
  BitString expected_nd;
  expected_nd.append_bit(false);
  expected_nd.append_bit(true);
  expected_nd.append(0, 4);
  CHECK(h.nd_blob == expected_nd);
  CHECK(direct_size_bits(fs, pair) == 14);
  CHECK(direct_size_bytes(fs, pair) == 2);

  // Forced 10-bit pointers reproduce the 23-bit hand count.
  DirectLayout wide = plan_direct_layout(fs, pair, 10);
  CHECK(wide.total_bits == 23);
  CHECK((wide.total_bits + 7) / 8 == 3);

  DirectStep step = decode_direct_step(h, pair, 0);
  CHECK_FALSE(step.egress);
  CHECK(step.primary.had_pointer);
  CHECK(step.primary.next_ptr == 0);
  CHECK_FALSE(step.secondary.has_value());
}

TEST_CASE("diamond layout: duplicated node gets its own ND, width 6") {
  Topology topo = undirected(4, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}, {2, 3, 1}}, false);
  ForwardingSubgraph fs = build_fs(topo, 0, 3);

  DirectLayout layout;
  DirectHeader h = encode_direct(fs, topo, &layout);
  CHECK(h.ptr_width == 6);
  CHECK_FALSE(plan_direct_layout(fs, topo, 4).fits);

  // Hand layout with 6-bit pointers: preamble 9; primary NDs at 9 and 20;
  // then node 2 (alternate of hop 0) at 37 and the copy of node 0 at 46.
  REQUIRE(fs.alternates[1].size() == 4);
  FsNodeRef node2 = fs.alternates[0][1];
  FsNodeRef copy0 = fs.alternates[1][1];
  CHECK(layout.nd_offset[fs.primary[0]] == 9);
  CHECK(layout.nd_offset[fs.primary[1]] == 20);
  CHECK(layout.nd_offset[node2] == 37);
  CHECK(layout.nd_offset[copy0] == 46);
  CHECK(layout.total_bits == 55);
  CHECK(direct_size_bytes(fs, topo) == 7);
  CHECK_FALSE(layout.nd_offset[fs.destination_ref()].has_value());

  // The penultimate primary router stores the absolute pointer zero.
  DirectHeader at_pen = h;
  at_pen.current_ptr = 20;
  DirectStep step = decode_direct_step(at_pen, topo, 1);
  CHECK(step.primary.had_pointer);
  CHECK(step.primary.next_ptr == 0);
  REQUIRE(step.secondary.has_value());
  CHECK(step.secondary->next_ptr == 46);  // jumps to the copy's ND

  CHECK_NOTHROW(walk_direct_roundtrip(fs, topo));
}

TEST_CASE("pointer update rule adds the ND size when no pointer is stored") {
  // A degree-128 hub makes a 9-bit single-SD ND (1 + 7-bit label + flag).
  std::vector<std::tuple<NodeId, NodeId, double>> links;
  for (NodeId v = 1; v <= 128; ++v) links.emplace_back(0, v, 1.0);
  Topology topo = Topology::from_links(129, links, false);

  DirectHeader h;
  h.ptr_width = 6;  // preamble 3 + 6 = 9 bits
  h.current_ptr = 17;
  h.nd_blob.append(0, 8);        // filler so the ND sits at absolute offset 17
  h.nd_blob.append_bit(false);   // one successor
  h.nd_blob.append(5, 7);        // label 5
  h.nd_blob.append_bit(false);   // no pointer: successor follows the ND
  DirectStep step = decode_direct_step(h, topo, 0);
  CHECK(step.nd_bits == 9);
  CHECK_FALSE(step.primary.had_pointer);
  CHECK(step.primary.next_ptr == 26);  // |ND| + CurrentNodePtr
  CHECK(step.primary.label.value == 5);
}

TEST_CASE("current pointer zero is the egress signal") {
  Topology pair = Topology::from_links(2, {{0, 1, 1.0}, {1, 0, 1.0}}, false);
  DirectHeader h;
  h.ptr_width = 4;
  h.current_ptr = 0;
  CHECK(decode_direct_step(h, pair, 1).egress);
}

TEST_CASE("decode errors: bad pointer, bad label") {
  Topology star = undirected(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}}, false);
  DirectHeader h;
  h.ptr_width = 4;
  h.nd_blob.append_bit(false);
  h.nd_blob.append(3, 2);  // node 0 advertises labels 0..2 only
  h.nd_blob.append_bit(true);
  h.nd_blob.append(0, 4);
  h.current_ptr = 8;
  CHECK_THROWS_WITH_AS(decode_direct_step(h, star, 0), doctest::Contains("not advertised"),
                       CodecError);
  h.current_ptr = 200;
  CHECK_THROWS_WITH_AS(decode_direct_step(h, star, 0), doctest::Contains("outside"), CodecError);
  h.current_ptr = 3;  // inside the preamble
  CHECK_THROWS_AS(decode_direct_step(h, star, 0), CodecError);
}

TEST_CASE("serialize and parse agree") {
  Topology topo = undirected(4, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}, {2, 3, 1}}, false);
  ForwardingSubgraph fs = build_fs(topo, 0, 3);
  DirectHeader h = encode_direct(fs, topo);
  BitString wire = serialize_direct(h);
  DirectHeader back = parse_direct(wire);
  CHECK(back.ptr_width == h.ptr_width);
  CHECK(back.current_ptr == h.current_ptr);
  CHECK(back.nd_blob == h.nd_blob);
  BitString bad;
  bad.append(0b1111, 4);
  CHECK_THROWS_AS(parse_direct(bad), CodecError);
}

TEST_CASE("offsets above 1023 bits are rejected") {
  Topology topo = ring(360);
  ForwardingSubgraph fs = build_fs(topo, 0, 359);
  CHECK_THROWS_WITH_AS(encode_direct(fs, topo), doctest::Contains("1023"), CodecError);
}

TEST_CASE("a long ring still fits where the Default format cannot") {
  // 139 alternate label bits overflow the Default length field, but the
  // Direct encoding just chains 139 small NDs.
  Topology topo = ring(140);
  ForwardingSubgraph fs = build_fs(topo, 0, 139);
  DirectLayout layout;
  DirectHeader h = encode_direct(fs, topo, &layout);
  CHECK(h.ptr_width == 10);
  CHECK_NOTHROW(walk_direct_roundtrip(fs, topo));
}

TEST_CASE("full decode walk over random FSes") {
  std::mt19937_64 rng(808);
  for (int g = 0; g < 40; ++g) {
    std::size_t n = 4 + g % 9;
    Topology topo = random_biconnected(rng, n, 1 + g % 5, g % 2);
    NodeId s = static_cast<NodeId>(rng() % n);
    NodeId d = static_cast<NodeId>(rng() % n);
    if (s == d) continue;
    ForwardingSubgraph fs = build_fs(topo, s, d);
    CHECK_NOTHROW(walk_direct_roundtrip(fs, topo));
  }
}
