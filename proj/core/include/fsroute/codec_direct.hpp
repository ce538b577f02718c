#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "fsroute/bitstream.hpp"
#include "fsroute/codec_default.hpp"  // CodecError
#include "fsroute/fs.hpp"
#include "fsroute/topology.hpp"

namespace fsroute {

// Node-pointer widths and their prefix codes: 0 -> 10 bits, 10 -> 8 bits,
// 110 -> 6 bits, 1110 -> 4 bits.
inline constexpr std::array<std::uint8_t, 4> kDirectPtrWidths = {4, 6, 8, 10};
std::uint8_t direct_width_code_bits(std::uint8_t width);                  // code length in bits
std::uint32_t direct_width_code_value(std::uint8_t width);                // code bit pattern

// Direct-format header. Every FS node except the destination is encoded as
// one NodeDescriptor; pointers are absolute bit offsets measured from bit 0
// of the serialized header, and 0 means "current router is the egress".
struct DirectHeader {
  std::uint8_t ptr_width = 10;
  std::uint32_t current_ptr = 0;
  BitString nd_blob;

  std::size_t preamble_bits() const;
  std::size_t total_bits() const { return preamble_bits() + nd_blob.size(); }
};

struct DirectLayout {
  std::uint8_t ptr_width = 0;
  std::size_t total_bits = 0;
  std::size_t max_nd_offset = 0;
  bool fits = false;
  std::vector<std::optional<std::size_t>> nd_offset;  // per FsNodeRef; none for destination
};

// Layout under one forced pointer width (no feasibility requirement).
DirectLayout plan_direct_layout(const ForwardingSubgraph& fs, const Topology& topo,
                                std::uint8_t width);

// Picks the smallest admissible width: every ND offset must be storable in
// the pointer field since forwarding writes node offsets back into it.
DirectHeader encode_direct(const ForwardingSubgraph& fs, const Topology& topo,
                           DirectLayout* layout_out = nullptr);

BitString serialize_direct(const DirectHeader& header);
DirectHeader parse_direct(const BitString& bits);

std::size_t direct_size_bits(const ForwardingSubgraph& fs, const Topology& topo);
std::size_t direct_size_bytes(const ForwardingSubgraph& fs, const Topology& topo);

struct DirectSuccessor {
  Label label;
  bool had_pointer = false;    // ContainsPtr? flag as parsed
  std::uint32_t next_ptr = 0;  // SD.Ptr when present, else |ND| + current_ptr
};

struct DirectStep {
  bool egress = false;
  DirectSuccessor primary;
  std::optional<DirectSuccessor> secondary;
  std::size_t nd_bits = 0;
};

// Parses the ND addressed by current_ptr with the current node's label
// width and applies the pointer-update rule to each successor.
DirectStep decode_direct_step(const DirectHeader& header, const Topology& topo, NodeId current);

}  // namespace fsroute
