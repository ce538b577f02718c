#include "fsroute/codec_default.hpp"

namespace fsroute {

namespace {

void append_segment(BitString& body, const ForwardingSubgraph& fs, const Topology& topo,
                    std::size_t i) {
  NodeId u = fs.nodes[fs.primary[i]].physical;
  NodeId v = fs.nodes[fs.primary[i + 1]].physical;
  Label p = topo.label_of(u, v);
  body.append(p.value, p.width);

  const auto labels = fs.alternates[i].empty() ? std::vector<Label>{}
                                               : fs.alternate_labels(i, topo);
  std::size_t alt_bits = 0;
  for (const Label& l : labels) alt_bits += l.width;

  if (alt_bits == 0) {
    body.append(0b110, 3);
    return;
  }
  if (alt_bits <= 31) {
    body.append_bit(false);
    body.append(alt_bits, 5);
  } else if (alt_bits <= kDefaultMaxAltBits) {
    body.append(0b10, 2);
    body.append(alt_bits, 7);
  } else {
    throw CodecError("alternate path labels exceed " + std::to_string(kDefaultMaxAltBits) +
                     " bits (" + std::to_string(alt_bits) + ")");
  }
  for (const Label& l : labels) body.append(l.value, l.width);
}

}  // namespace

DefaultHeader encode_default(const ForwardingSubgraph& fs, const Topology& topo) {
  fs.validate(topo);
  DefaultHeader h;
  for (std::size_t i = 0; i + 1 < fs.primary.size(); ++i) {
    append_segment(h.body, fs, topo, i);
  }
  if (h.body.size() > 0xffff) throw CodecError("body exceeds the 16-bit header-length field");
  h.header_length = static_cast<std::uint16_t>(h.body.size());
  h.on_alternate = false;
  return h;
}

BitString serialize_default(const DefaultHeader& header) {
  if (header.header_length != header.body.size()) {
    throw CodecError("header_length does not match body size");
  }
  BitString bits;
  bits.append(header.header_length, 16);
  bits.append_bit(header.on_alternate);
  bits.append_bits(header.body, 0, header.body.size());
  return bits;
}

DefaultHeader parse_default(const BitString& bits) {
  if (bits.size() < 17) throw CodecError("truncated header: missing length field");
  DefaultHeader h;
  h.header_length = static_cast<std::uint16_t>(bits.read(0, 16));
  h.on_alternate = bits.bit(16);
  if (bits.size() < 17u + h.header_length) throw CodecError("truncated body");
  h.body = bits.slice(17, h.header_length);
  return h;
}

std::size_t default_size_bits(const ForwardingSubgraph& fs, const Topology& topo) {
  return 17 + encode_default(fs, topo).body.size();
}

std::size_t default_size_bytes(const ForwardingSubgraph& fs, const Topology& topo) {
  return (default_size_bits(fs, topo) + 7) / 8;
}

DefaultDecode decode_default(const DefaultHeader& header, const Topology& topo, NodeId current) {
  topo.require_node(current);
  if (header.header_length != header.body.size()) {
    throw CodecError("header_length does not match body size");
  }
  DefaultDecode out;
  if (header.header_length == 0) {
    out.at_destination = true;
    return out;
  }
  const std::uint8_t width = topo.label_width(current);
  BitReader r(header.body);
  try {
    if (header.on_alternate) {
      Label l{static_cast<std::uint32_t>(r.read(width)), width};
      if (!topo.neighbor_by_label(current, l.value)) {
        throw CodecError("label value " + std::to_string(l.value) + " not advertised by node " +
                         std::to_string(current));
      }
      out.alternate_label = l;
      return out;
    }
    DefaultSegmentView seg;
    seg.primary = Label{static_cast<std::uint32_t>(r.read(width)), width};
    if (!topo.neighbor_by_label(current, seg.primary.value)) {
      throw CodecError("label value " + std::to_string(seg.primary.value) +
                       " not advertised by node " + std::to_string(current));
    }
    if (r.read(1) == 0) {
      seg.code_bits = 1;
      seg.length_bits = 5;
    } else if (r.read(1) == 0) {
      seg.code_bits = 2;
      seg.length_bits = 7;
    } else if (r.read(1) == 0) {
      seg.code_bits = 3;
      seg.length_bits = 0;
    } else {
      throw CodecError("bad segment code 111");
    }
    std::size_t alt_bits = seg.length_bits ? r.read(seg.length_bits) : 0;
    if (alt_bits > r.remaining()) throw CodecError("length field exceeds remaining bits");
    seg.alt_bits = header.body.slice(r.position(), alt_bits);
    seg.has_alternate = alt_bits > 0;  // zero under code 0/10 is tolerated
    seg.segment_bits = r.position() + alt_bits;
    out.segment = seg;
    return out;
  } catch (const BitstreamError&) {
    throw CodecError("truncated body");
  }
}

}  // namespace fsroute
