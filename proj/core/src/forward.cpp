#include "fsroute/forward.hpp"

namespace fsroute {

std::vector<NodeId> PacketTrace::node_sequence() const {
  std::vector<NodeId> seq;
  for (const Hop& h : hops) seq.push_back(h.node);
  seq.push_back(final_node);
  return seq;
}

DefaultStepOutcome forward_default_step(DefaultHeader& header, const Topology& topo,
                                        NodeId current, const FailedSet& failed) {
  DefaultStepOutcome out;
  const DefaultDecode dec = decode_default(header, topo, current);
  if (dec.at_destination) {
    out.arrived = true;
    return out;
  }
  auto drop = [&](const std::string& why) {
    out.dropped = true;
    out.drop_reason = why;
    return out;
  };

  if (dec.alternate_label) {
    const Label l = *dec.alternate_label;
    NodeId next = *topo.neighbor_by_label(current, l.value);
    if (failed.link_down(current, next)) {
      return drop("alternate-path link " + std::to_string(current) + "-" + std::to_string(next) +
                  " is down");
    }
    header.body = header.body.slice(l.width, header.body.size() - l.width);
    header.header_length = static_cast<std::uint16_t>(header.body.size());
    out.hop = Hop{current, next, l, HopMode::Alternate};
    return out;
  }

  const DefaultSegmentView& seg = *dec.segment;
  NodeId primary_next = *topo.neighbor_by_label(current, seg.primary.value);
  if (!failed.link_down(current, primary_next)) {
    header.body = header.body.slice(seg.segment_bits, header.body.size() - seg.segment_bits);
    header.header_length = static_cast<std::uint16_t>(header.body.size());
    out.hop = Hop{current, primary_next, seg.primary, HopMode::Primary};
    return out;
  }
  if (!seg.has_alternate) {
    return drop("primary link down and the alternate path length is 0");
  }
  const std::uint8_t width = topo.label_width(current);
  if (seg.alt_bits.size() < width) throw ForwardError("alternate labels shorter than one label");
  Label d1{static_cast<std::uint32_t>(seg.alt_bits.read(0, width)), width};
  auto d1_next = topo.neighbor_by_label(current, d1.value);
  if (!d1_next) {
    throw ForwardError("alternate label value " + std::to_string(d1.value) +
                       " not advertised by node " + std::to_string(current));
  }
  if (failed.link_down(current, *d1_next)) {
    return drop("alternate first-hop link " + std::to_string(current) + "-" +
                std::to_string(*d1_next) + " is down");
  }
  header.body = seg.alt_bits.slice(width, seg.alt_bits.size() - width);
  header.header_length = static_cast<std::uint16_t>(header.body.size());
  header.on_alternate = true;
  out.hop = Hop{current, *d1_next, d1, HopMode::Alternate};
  return out;
}

namespace {

void check_endpoints(const Topology& topo, NodeId source, const FailedSet& failed) {
  topo.require_node(source);
  if (failed.nodes.count(source)) {
    throw std::invalid_argument("source node " + std::to_string(source) + " is failed");
  }
}

void finish_arrival(PacketTrace& trace, NodeId node, const FailedSet& failed) {
  if (failed.nodes.count(node)) {
    throw std::invalid_argument("destination node " + std::to_string(node) + " is failed");
  }
  trace.delivered = true;
  trace.final_node = node;
}

}  // namespace

PacketTrace forward_packet(DefaultHeader header, const Topology& topo, NodeId source,
                           const FailedSet& failed) {
  check_endpoints(topo, source, failed);
  PacketTrace trace;
  NodeId current = source;
  const std::size_t hop_cap = header.body.size() + topo.node_count() + 2;
  for (std::size_t steps = 0; steps <= hop_cap; ++steps) {
    DefaultStepOutcome step = forward_default_step(header, topo, current, failed);
    if (step.arrived) {
      finish_arrival(trace, current, failed);
      return trace;
    }
    if (step.dropped) {
      trace.delivered = false;
      trace.final_node = current;
      trace.drop_reason = step.drop_reason;
      return trace;
    }
    trace.hops.push_back(step.hop);
    trace.latency += topo.link_latency(current, step.hop.next);
    current = step.hop.next;
  }
  throw ForwardError("no forwarding progress (malformed header?)");
}

PacketTrace forward_packet(DirectHeader header, const Topology& topo, NodeId source,
                           const FailedSet& failed) {
  check_endpoints(topo, source, failed);
  PacketTrace trace;
  NodeId current = source;
  bool switched = false;
  const std::size_t hop_cap = header.nd_blob.size() + topo.node_count() + 2;
  for (std::size_t steps = 0; steps <= hop_cap; ++steps) {
    DirectStep step = decode_direct_step(header, topo, current);
    if (step.egress) {
      finish_arrival(trace, current, failed);
      return trace;
    }
    const DirectSuccessor* chosen = nullptr;
    bool via_secondary = false;
    NodeId next = *topo.neighbor_by_label(current, step.primary.label.value);
    if (!failed.link_down(current, next)) {
      chosen = &step.primary;
    } else if (step.secondary) {
      NodeId alt_next = *topo.neighbor_by_label(current, step.secondary->label.value);
      if (!failed.link_down(current, alt_next)) {
        chosen = &*step.secondary;
        next = alt_next;
        via_secondary = true;
      }
    }
    if (!chosen) {
      trace.delivered = false;
      trace.final_node = current;
      trace.drop_reason = step.secondary ? "both successor links are down"
                                         : "primary link down and no second successor";
      return trace;
    }
    switched = switched || via_secondary;
    trace.hops.push_back(Hop{current, next, chosen->label,
                             switched ? HopMode::Alternate : HopMode::Primary});
    trace.latency += topo.link_latency(current, next);
    header.current_ptr = chosen->next_ptr;
    current = next;
  }
  throw ForwardError("no forwarding progress (malformed header?)");
}

WindowedDefaultHeader WindowedDefaultHeader::from(const DefaultHeader& h) {
  WindowedDefaultHeader w;
  w.body = h.body;
  w.start = 0;
  w.end = h.body.size();
  w.on_alternate = h.on_alternate;
  return w;
}

PacketTrace forward_packet_windowed(WindowedDefaultHeader header, const Topology& topo,
                                    NodeId source, const FailedSet& failed) {
  check_endpoints(topo, source, failed);
  PacketTrace trace;
  NodeId current = source;
  const std::size_t hop_cap = header.body.size() + topo.node_count() + 2;
  for (std::size_t steps = 0; steps <= hop_cap; ++steps) {
    // The live window [start,end) plays the role of the rewritten body.
    DefaultHeader view;
    view.body = header.body.slice(header.start, header.end - header.start);
    view.header_length = static_cast<std::uint16_t>(view.body.size());
    view.on_alternate = header.on_alternate;
    const DefaultDecode dec = decode_default(view, topo, current);
    if (dec.at_destination) {
      finish_arrival(trace, current, failed);
      return trace;
    }
    if (dec.alternate_label) {
      const Label l = *dec.alternate_label;
      NodeId next = *topo.neighbor_by_label(current, l.value);
      if (failed.link_down(current, next)) {
        trace.final_node = current;
        trace.drop_reason = "alternate-path link " + std::to_string(current) + "-" +
                            std::to_string(next) + " is down";
        return trace;
      }
      header.start += l.width;
      trace.hops.push_back(Hop{current, next, l, HopMode::Alternate});
      trace.latency += topo.link_latency(current, next);
      current = next;
      continue;
    }
    const DefaultSegmentView& seg = *dec.segment;
    NodeId primary_next = *topo.neighbor_by_label(current, seg.primary.value);
    if (!failed.link_down(current, primary_next)) {
      header.start += seg.segment_bits;
      trace.hops.push_back(Hop{current, primary_next, seg.primary, HopMode::Primary});
      trace.latency += topo.link_latency(current, primary_next);
      current = primary_next;
      continue;
    }
    if (!seg.has_alternate) {
      trace.final_node = current;
      trace.drop_reason = "primary link down and the alternate path length is 0";
      return trace;
    }
    const std::uint8_t width = topo.label_width(current);
    Label d1{static_cast<std::uint32_t>(seg.alt_bits.read(0, width)), width};
    NodeId d1_next = *topo.neighbor_by_label(current, d1.value);
    if (failed.link_down(current, d1_next)) {
      trace.final_node = current;
      trace.drop_reason = "alternate first-hop link " + std::to_string(current) + "-" +
                          std::to_string(d1_next) + " is down";
      return trace;
    }
    // d2..dl is a contiguous range of the original body: point at it.
    const std::size_t alt_pos =
        header.start + seg.segment_bits - seg.alt_bits.size();
    header.start = alt_pos + width;
    header.end = alt_pos + seg.alt_bits.size();
    header.on_alternate = true;
    trace.hops.push_back(Hop{current, d1_next, d1, HopMode::Alternate});
    trace.latency += topo.link_latency(current, d1_next);
    current = d1_next;
  }
  throw ForwardError("no forwarding progress (malformed header?)");
}

double delivered_latency(const ForwardingSubgraph& fs, const Topology& topo, LinkRef failed_link) {
  std::size_t idx = fs.primary.size();
  for (std::size_t i = 0; i + 1 < fs.primary.size(); ++i) {
    if (fs.nodes[fs.primary[i]].physical == failed_link.src &&
        fs.nodes[fs.primary[i + 1]].physical == failed_link.dst) {
      idx = i;
      break;
    }
  }
  if (idx == fs.primary.size()) throw ForwardError("failed link is not on the primary path");
  if (fs.alternates[idx].empty()) throw ForwardError("no alternate at the failure point");
  double latency = 0.0;
  for (std::size_t i = 0; i < idx; ++i) {
    latency += topo.link_latency(fs.nodes[fs.primary[i]].physical,
                                 fs.nodes[fs.primary[i + 1]].physical);
  }
  const auto& alt = fs.alternates[idx];
  for (std::size_t i = 0; i + 1 < alt.size(); ++i) {
    latency += topo.link_latency(fs.nodes[alt[i]].physical, fs.nodes[alt[i + 1]].physical);
  }
  return latency;
}

}  // namespace fsroute
