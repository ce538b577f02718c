#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace fsroute {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct TopologyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Directed link endpoints, used as a lightweight key.
struct LinkRef {
  NodeId src = kNoNode;
  NodeId dst = kNoNode;

  friend bool operator==(const LinkRef&, const LinkRef&) = default;
  friend auto operator<=>(const LinkRef&, const LinkRef&) = default;
};

// A locally-unique outgoing link label. All labels at a node share the
// node's width, ceil(log2(out-degree)); width 0 is valid for degree-1 nodes.
struct Label {
  std::uint32_t value = 0;
  std::uint8_t width = 0;

  friend bool operator==(const Label&, const Label&) = default;
};

std::uint8_t label_width_for_degree(std::size_t degree);

// Immutable after load/finalize; all queries are read-only and safe to run
// concurrently from many threads.
class Topology {
 public:
  struct OutEdge {
    NodeId dst;
    double latency;
  };
  struct InEdge {
    NodeId src;
    double latency;
  };

  Topology() = default;

  static Topology from_links(std::size_t node_count,
                             const std::vector<std::tuple<NodeId, NodeId, double>>& links,
                             bool weighted);

  std::size_t node_count() const { return out_.size(); }
  std::size_t link_count() const { return link_count_; }
  bool weighted() const { return weighted_; }

  bool has_node(NodeId u) const { return u < out_.size(); }
  void require_node(NodeId u) const;

  const std::vector<OutEdge>& out_edges(NodeId u) const { return out_[u]; }
  const std::vector<InEdge>& in_edges(NodeId u) const { return in_[u]; }
  std::size_t out_degree(NodeId u) const { return out_[u].size(); }

  const OutEdge* find_out_edge(NodeId u, NodeId v) const;
  double link_latency(NodeId u, NodeId v) const;  // throws if absent

  std::uint8_t label_width(NodeId u) const { return label_width_for_degree(out_[u].size()); }
  Label label_of(NodeId u, NodeId v) const;                       // throws if absent
  std::optional<NodeId> neighbor_by_label(NodeId u, std::uint32_t value) const;

  std::vector<std::tuple<NodeId, NodeId, double>> all_links() const;

 private:
  friend Topology& assign_labels(Topology& topo);

  std::vector<std::vector<OutEdge>> out_;
  std::vector<std::vector<InEdge>> in_;
  std::size_t link_count_ = 0;
  bool weighted_ = false;
  bool finalized_ = false;
};

// Sorts each adjacency list by destination id so that label values are the
// sorted-neighbor indices. Idempotent; load_topology/from_links call it.
Topology& assign_labels(Topology& topo);

// Edge-list file: whitespace-separated "src dst [latency]" lines, '#' starts
// a comment. Missing latency column means 1.0 and an unweighted topology.
Topology load_topology(const std::string& path);
Topology parse_topology(std::istream& in, const std::string& name);

// Removed elements for failure-avoiding queries.
struct Removed {
  std::vector<LinkRef> links;
  std::vector<NodeId> nodes;

  bool link_removed(NodeId u, NodeId v) const;
  bool node_removed(NodeId u) const;
  static Removed none() { return {}; }
  static Removed link(NodeId u, NodeId v) { return Removed{{{u, v}}, {}}; }
  static Removed node(NodeId n) { return Removed{{}, {n}}; }
};

struct PathResult {
  std::vector<NodeId> nodes;  // s..d inclusive
  double latency = 0.0;
  std::size_t hops = 0;
};

// Per-destination shortest-path labels from a reverse Dijkstra run:
// dist[u] / hops[u] are the minimum latency to dest and the minimum hop
// count among minimum-latency paths. Unreached nodes have reached[u]==0.
struct ShortestToDest {
  NodeId dest = kNoNode;
  std::vector<double> dist;
  std::vector<std::uint32_t> hops;
  std::vector<std::uint8_t> reached;

  bool ok(NodeId u) const { return reached[u] != 0; }
};

// stop_at (optional) ends the run once that node settles; labels of nodes
// at smaller (dist, hops) are final either way, which is all the canonical
// walk from stop_at ever reads.
ShortestToDest shortest_to_dest(const Topology& topo, NodeId dest, const Removed& removed,
                                NodeId stop_at = kNoNode);

// One greedy step of the canonical path: among optimal out-edges pick the
// smallest next node id. Returns nothing at the destination or off-tree.
std::optional<NodeId> canonical_step(const Topology& topo, const ShortestToDest& sd,
                                     NodeId u, const Removed& removed);

// Tie-broken shortest path: minimum latency, then fewest hops, then the
// lexicographically smallest node-id sequence. Suffixes of a canonical path
// are themselves canonical for the same destination and removed set.
std::optional<PathResult> shortest_path(const Topology& topo, NodeId s, NodeId d,
                                        const Removed& removed = Removed::none());

// Forward single-source run; dist/hops follow the same tie rules.
struct ShortestFromSource {
  NodeId source = kNoNode;
  std::vector<double> dist;
  std::vector<std::uint32_t> hops;
  std::vector<std::uint8_t> reached;

  bool ok(NodeId u) const { return reached[u] != 0; }
};

ShortestFromSource shortest_from_source(const Topology& topo, NodeId s, const Removed& removed);

// Treats each directed pair as an undirected edge. False for n < 3.
bool is_biconnected(const Topology& topo);

}  // namespace fsroute
