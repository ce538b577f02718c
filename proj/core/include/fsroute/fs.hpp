#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fsroute/topology.hpp"

namespace fsroute {

struct FsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FailureModel {
  enum class Kind { SingleLink, SingleNode, Srlg };

  Kind kind = Kind::SingleLink;
  std::vector<std::vector<LinkRef>> groups;  // srlg only

  static FailureModel single_link() { return {Kind::SingleLink, {}}; }
  static FailureModel single_node() { return {Kind::SingleNode, {}}; }
  static FailureModel srlg(std::vector<std::vector<LinkRef>> g) {
    return {Kind::Srlg, std::move(g)};
  }
};

// SRLG group file: one group per line, links as "src-dst" tokens, '#' comments.
std::vector<std::vector<LinkRef>> load_srlg_groups(const std::string& path);
std::vector<std::vector<LinkRef>> parse_srlg_groups(std::istream& in, const std::string& name);

using FsNodeRef = std::uint32_t;

// One FS node: a (physical node, copy) pair with at most two successors.
// next_primary is the preferred outgoing edge (for nodes that lie only on
// alternate paths it is their single successor); next_alternate exists only
// on primary-path nodes that have an alternate.
struct FsNode {
  NodeId physical = kNoNode;
  std::uint32_t copy_index = 0;
  std::optional<FsNodeRef> next_primary;
  std::optional<FsNodeRef> next_alternate;
};

struct ForwardingSubgraph {
  std::vector<FsNode> nodes;
  std::vector<FsNodeRef> primary;                  // source..destination
  std::vector<std::vector<FsNodeRef>> alternates;  // per primary hop; full node path
                                                   // v_i..destination, empty if none

  NodeId source_physical() const { return nodes[primary.front()].physical; }
  NodeId destination_physical() const { return nodes[primary.back()].physical; }
  FsNodeRef destination_ref() const { return primary.back(); }

  std::size_t edge_count() const;
  std::size_t primary_hops() const { return primary.size() - 1; }

  // Labels along the alternate of primary hop i; empty if no alternate.
  std::vector<Label> alternate_labels(std::size_t i, const Topology& topo) const;
  std::size_t alternate_label_bits(std::size_t i, const Topology& topo) const;

  // Deterministic topological order (ties by (physical, copy_index)).
  std::vector<FsNodeRef> topological_order() const;

  std::string node_token(FsNodeRef r) const;
  std::string dump(const Topology& topo) const;

  // Structural checks: acyclic, edges map to topology links, alternates end
  // at the destination, successor bounds. Throws FsError on violation.
  void validate(const Topology& topo) const;
};

std::size_t fs_edge_count(const ForwardingSubgraph& fs);

// Incremental FS assembly. add_alternate() inserts the alternate path for
// one primary hop edge-by-edge: an existing node is reused only when the
// remaining path exactly matches its onward chain and no cycle would form;
// otherwise the edge targets a fresh copy of its head node.
class FsBuilder {
 public:
  FsBuilder(const Topology& topo, const std::vector<NodeId>& primary_path);

  void add_alternate(std::size_t primary_index, const std::vector<NodeId>& physical_path);
  ForwardingSubgraph take();
  const ForwardingSubgraph& current() const { return fs_; }

 private:
  FsNodeRef new_node(NodeId physical);
  bool reaches(FsNodeRef from, FsNodeRef to) const;
  bool chain_matches(FsNodeRef start, const std::vector<NodeId>& path, std::size_t from) const;
  void connect(FsNodeRef from, FsNodeRef to, bool as_alternate);

  const Topology* topo_;
  ForwardingSubgraph fs_;
  std::vector<std::uint32_t> copies_;  // copies created per physical node
};

// Primary = tie-broken shortest path; one shortest alternate per primary hop
// with the hop's link, next-hop node, or SRLG group removed.
ForwardingSubgraph build_fs(const Topology& topo, NodeId s, NodeId d,
                            const FailureModel& model = FailureModel::single_link());

}  // namespace fsroute
