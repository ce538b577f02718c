#pragma once

#include <cstdint>
#include <optional>

#include "fsroute/bitstream.hpp"
#include "fsroute/fs.hpp"
#include "fsroute/topology.hpp"

namespace fsroute {

struct CodecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Default-format header. header_length counts body bits only; the 2-byte
// length field and the on-alternate bit are not included. In primary mode
// the body is one segment per primary hop; in alternate mode it is the
// remaining alternate labels, nothing else.
struct DefaultHeader {
  std::uint16_t header_length = 0;
  bool on_alternate = false;
  BitString body;
};

// Segment layout: primary label, then a prefix code selecting the width of
// the length field (0 -> 5 bits, 10 -> 7 bits, 110 -> none/empty alternate),
// then the alternate labels. The encoder picks the shortest admissible code.
inline constexpr std::size_t kDefaultMaxAltBits = 127;

DefaultHeader encode_default(const ForwardingSubgraph& fs, const Topology& topo);

BitString serialize_default(const DefaultHeader& header);
DefaultHeader parse_default(const BitString& bits);

std::size_t default_size_bits(const ForwardingSubgraph& fs, const Topology& topo);
std::size_t default_size_bytes(const ForwardingSubgraph& fs, const Topology& topo);

struct DefaultSegmentView {
  Label primary;
  bool has_alternate = false;
  BitString alt_bits;           // d1..dl concatenated
  std::size_t segment_bits = 0;
  std::uint8_t code_bits = 0;   // 1, 2 or 3
  std::uint8_t length_bits = 0; // 5, 7 or 0
};

struct DefaultDecode {
  bool at_destination = false;
  std::optional<DefaultSegmentView> segment;  // primary mode
  std::optional<Label> alternate_label;       // alternate mode
};

// Parses exactly one segment (primary mode) or one label (alternate mode)
// using the current node's advertised label width. The decoder accepts the
// non-canonical zero value under codes 0 and 10.
DefaultDecode decode_default(const DefaultHeader& header, const Topology& topo, NodeId current);

}  // namespace fsroute
