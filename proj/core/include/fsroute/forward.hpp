#pragma once

#include <set>
#include <string>
#include <vector>

#include "fsroute/codec_default.hpp"
#include "fsroute/codec_direct.hpp"
#include "fsroute/fs.hpp"
#include "fsroute/topology.hpp"

namespace fsroute {

struct ForwardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Failed elements visible to the data plane. fail_link() marks both
// directions of a physical link; a failed node fails all incident links.
struct FailedSet {
  std::set<std::pair<NodeId, NodeId>> links;
  std::set<NodeId> nodes;

  void fail_link(NodeId u, NodeId v) {
    links.insert({u, v});
    links.insert({v, u});
  }
  void fail_directed(NodeId u, NodeId v) { links.insert({u, v}); }
  void fail_node(NodeId n) { nodes.insert(n); }

  bool link_down(NodeId u, NodeId v) const {
    return nodes.count(u) || nodes.count(v) || links.count({u, v});
  }
  bool empty() const { return links.empty() && nodes.empty(); }
};

enum class HopMode { Primary, Alternate };

struct Hop {
  NodeId node = kNoNode;  // forwarding node
  NodeId next = kNoNode;
  Label label;
  HopMode mode = HopMode::Primary;
};

struct PacketTrace {
  std::vector<Hop> hops;
  bool delivered = false;
  NodeId final_node = kNoNode;
  std::string drop_reason;  // empty when delivered
  double latency = 0.0;

  std::vector<NodeId> node_sequence() const;  // source..final
};

// Single hop of Default-format forwarding; mutates the header exactly as a
// router would (segment/label removal, header-length update, on-alternate).
struct DefaultStepOutcome {
  bool arrived = false;
  bool dropped = false;
  std::string drop_reason;
  Hop hop;
};
DefaultStepOutcome forward_default_step(DefaultHeader& header, const Topology& topo,
                                        NodeId current, const FailedSet& failed);

PacketTrace forward_packet(DefaultHeader header, const Topology& topo, NodeId source,
                           const FailedSet& failed);
PacketTrace forward_packet(DirectHeader header, const Topology& topo, NodeId source,
                           const FailedSet& failed);

// Start/end-pointer representation of the Default header: the body stays
// in place and two bit pointers delimit the live window. Trace-equivalent
// to the prefix/suffix-rewriting representation.
struct WindowedDefaultHeader {
  BitString body;
  std::size_t start = 0;
  std::size_t end = 0;
  bool on_alternate = false;

  static WindowedDefaultHeader from(const DefaultHeader& h);
};
PacketTrace forward_packet_windowed(WindowedDefaultHeader header, const Topology& topo,
                                    NodeId source, const FailedSet& failed);

// Latency of the delivered packet when the given primary link fails: the
// primary prefix down to the failure point plus the alternate from there.
double delivered_latency(const ForwardingSubgraph& fs, const Topology& topo, LinkRef failed_link);

}  // namespace fsroute
