#include "fsroute/codec_direct.hpp"

#include <algorithm>

namespace fsroute {

std::uint8_t direct_width_code_bits(std::uint8_t width) {
  switch (width) {
    case 10: return 1;  // 0
    case 8: return 2;   // 10
    case 6: return 3;   // 110
    case 4: return 4;   // 1110
  }
  throw CodecError("unsupported node-pointer width");
}

std::uint32_t direct_width_code_value(std::uint8_t width) {
  switch (width) {
    case 10: return 0b0;
    case 8: return 0b10;
    case 6: return 0b110;
    case 4: return 0b1110;
  }
  throw CodecError("unsupported node-pointer width");
}

std::size_t DirectHeader::preamble_bits() const {
  return direct_width_code_bits(ptr_width) + ptr_width;
}

namespace {

// ND layout plan for one FS node.
struct NdPlan {
  FsNodeRef node;
  struct Sd {
    FsNodeRef target;
    bool immediate;  // successor ND follows this ND in the blob
  };
  Sd sd1;
  std::optional<Sd> sd2;
};

std::vector<NdPlan> plan_nds(const ForwardingSubgraph& fs) {
  std::vector<FsNodeRef> order;
  std::vector<std::uint8_t> placed(fs.nodes.size(), 0);
  const FsNodeRef dest = fs.destination_ref();
  placed[dest] = 1;  // destination has no outgoing links, so no ND
  // Primary-path nodes first, then each alternate's yet-unplaced nodes in
  // primary-path order.
  for (std::size_t i = 0; i + 1 < fs.primary.size(); ++i) {
    order.push_back(fs.primary[i]);
    placed[fs.primary[i]] = 1;
  }
  for (const auto& alt : fs.alternates) {
    for (FsNodeRef r : alt) {
      if (placed[r]) continue;
      order.push_back(r);
      placed[r] = 1;
    }
  }

  for (FsNodeRef r = 0; r < fs.nodes.size(); ++r) {
    if (!placed[r]) throw CodecError("FS node not on the primary or any alternate");
  }

  std::vector<std::size_t> position(fs.nodes.size(), 0);
  for (std::size_t p = 0; p < order.size(); ++p) position[order[p]] = p;

  std::vector<NdPlan> plans;
  plans.reserve(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) {
    FsNodeRef r = order[p];
    const FsNode& n = fs.nodes[r];
    if (!n.next_primary) throw CodecError("non-destination FS node without a successor");
    NdPlan plan;
    plan.node = r;
    FsNodeRef succ = *n.next_primary;
    bool immediate = succ != dest && p + 1 < order.size() && order[p + 1] == succ;
    plan.sd1 = {succ, immediate};
    if (n.next_alternate) {
      plan.sd2 = NdPlan::Sd{*n.next_alternate, false};  // second SD always uses a pointer
    }
    plans.push_back(plan);
  }
  return plans;
}

std::size_t nd_bits(const ForwardingSubgraph& fs, const Topology& topo, const NdPlan& plan,
                    std::uint8_t width) {
  const std::uint8_t label_w = topo.label_width(fs.nodes[plan.node].physical);
  std::size_t bits = 1;  // NumberOfSuccessors
  bits += label_w + 1 + (plan.sd1.immediate ? 0 : width);
  if (plan.sd2) bits += label_w + 1 + width;
  return bits;
}

DirectLayout layout_for(const ForwardingSubgraph& fs, const Topology& topo,
                        const std::vector<NdPlan>& plans, std::uint8_t width) {
  DirectLayout layout;
  layout.ptr_width = width;
  layout.nd_offset.assign(fs.nodes.size(), std::nullopt);
  std::size_t pos = direct_width_code_bits(width) + width;
  for (const NdPlan& plan : plans) {
    layout.nd_offset[plan.node] = pos;
    layout.max_nd_offset = pos;
    pos += nd_bits(fs, topo, plan, width);
  }
  layout.total_bits = pos;
  layout.fits = layout.max_nd_offset <= ((std::size_t{1} << width) - 1);
  return layout;
}

}  // namespace

DirectLayout plan_direct_layout(const ForwardingSubgraph& fs, const Topology& topo,
                                std::uint8_t width) {
  direct_width_code_bits(width);  // validates
  return layout_for(fs, topo, plan_nds(fs), width);
}

DirectHeader encode_direct(const ForwardingSubgraph& fs, const Topology& topo,
                           DirectLayout* layout_out) {
  fs.validate(topo);
  const auto plans = plan_nds(fs);
  DirectLayout layout;
  bool found = false;
  for (std::uint8_t width : kDirectPtrWidths) {
    layout = layout_for(fs, topo, plans, width);
    if (layout.fits) {
      found = true;
      break;
    }
  }
  if (!found) {
    throw CodecError("ND offset " + std::to_string(layout.max_nd_offset) +
                     " exceeds the maximum addressable 1023 bits");
  }

  const FsNodeRef dest = fs.destination_ref();
  auto ptr_value = [&](FsNodeRef target) -> std::uint32_t {
    if (target == dest) return 0;
    return static_cast<std::uint32_t>(*layout.nd_offset[target]);
  };

  DirectHeader h;
  h.ptr_width = layout.ptr_width;
  h.current_ptr = static_cast<std::uint32_t>(*layout.nd_offset[fs.primary.front()]);
  for (const NdPlan& plan : plans) {
    const FsNode& n = fs.nodes[plan.node];
    h.nd_blob.append_bit(plan.sd2.has_value());
    auto append_sd = [&](const NdPlan::Sd& sd) {
      Label l = topo.label_of(n.physical, fs.nodes[sd.target].physical);
      h.nd_blob.append(l.value, l.width);
      h.nd_blob.append_bit(!sd.immediate);
      if (!sd.immediate) h.nd_blob.append(ptr_value(sd.target), layout.ptr_width);
    };
    append_sd(plan.sd1);
    if (plan.sd2) append_sd(*plan.sd2);
  }
  if (layout_out) *layout_out = layout;
  return h;
}

BitString serialize_direct(const DirectHeader& header) {
  BitString bits;
  bits.append(direct_width_code_value(header.ptr_width),
              direct_width_code_bits(header.ptr_width));
  bits.append(header.current_ptr, header.ptr_width);
  bits.append_bits(header.nd_blob, 0, header.nd_blob.size());
  return bits;
}

DirectHeader parse_direct(const BitString& bits) {
  DirectHeader h;
  std::size_t pos = 0;
  int ones = 0;
  try {
    while (bits.bit(pos)) {
      ++pos;
      if (++ones > 3) throw CodecError("bad NodePtrLength code 1111");
    }
    ++pos;  // terminating 0
  } catch (const BitstreamError&) {
    throw CodecError("truncated NodePtrLength field");
  }
  static constexpr std::uint8_t widths_by_ones[4] = {10, 8, 6, 4};
  h.ptr_width = widths_by_ones[ones];
  try {
    h.current_ptr = static_cast<std::uint32_t>(bits.read(pos, h.ptr_width));
  } catch (const BitstreamError&) {
    throw CodecError("truncated CurrentNodePtr field");
  }
  pos += h.ptr_width;
  h.nd_blob = bits.slice(pos, bits.size() - pos);
  return h;
}

std::size_t direct_size_bits(const ForwardingSubgraph& fs, const Topology& topo) {
  DirectLayout layout;
  encode_direct(fs, topo, &layout);
  return layout.total_bits;
}

std::size_t direct_size_bytes(const ForwardingSubgraph& fs, const Topology& topo) {
  return (direct_size_bits(fs, topo) + 7) / 8;
}

DirectStep decode_direct_step(const DirectHeader& header, const Topology& topo, NodeId current) {
  topo.require_node(current);
  DirectStep out;
  if (header.current_ptr == 0) {
    out.egress = true;
    return out;
  }
  const std::size_t preamble = header.preamble_bits();
  if (header.current_ptr < preamble ||
      header.current_ptr >= preamble + header.nd_blob.size()) {
    throw CodecError("CurrentNodePtr " + std::to_string(header.current_ptr) +
                     " is outside the ND blob");
  }
  const std::uint8_t label_w = topo.label_width(current);
  BitReader r(header.nd_blob, header.current_ptr - preamble);
  auto read_sd = [&]() {
    DirectSuccessor sd;
    sd.label = Label{static_cast<std::uint32_t>(r.read(label_w)), label_w};
    if (!topo.neighbor_by_label(current, sd.label.value)) {
      throw CodecError("label value " + std::to_string(sd.label.value) +
                       " not advertised by node " + std::to_string(current));
    }
    sd.had_pointer = r.read(1) != 0;
    if (sd.had_pointer) sd.next_ptr = static_cast<std::uint32_t>(r.read(header.ptr_width));
    return sd;
  };
  try {
    bool two = r.read(1) != 0;
    out.primary = read_sd();
    if (two) out.secondary = read_sd();
    out.nd_bits = r.position() - (header.current_ptr - preamble);
  } catch (const BitstreamError&) {
    throw CodecError("ND extends past the end of the blob");
  }
  // CurrentNodePtr <- |ND| + CurrentNodePtr when the SD carries no pointer.
  if (!out.primary.had_pointer) {
    out.primary.next_ptr = static_cast<std::uint32_t>(header.current_ptr + out.nd_bits);
  }
  if (out.secondary && !out.secondary->had_pointer) {
    out.secondary->next_ptr = static_cast<std::uint32_t>(header.current_ptr + out.nd_bits);
  }
  return out;
}

}  // namespace fsroute
