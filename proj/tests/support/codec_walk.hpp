#pragma once

#include "fsroute/codec_default.hpp"
#include "fsroute/codec_direct.hpp"
#include "fsroute/fs.hpp"

// Full decode-and-walk checks: decoding an encoded FS and walking every
// branch must reproduce the FS's primary and alternate label sequences
// exactly. Throws std::runtime_error with a description on any mismatch.
namespace fsroute::testing {

void walk_default_roundtrip(const ForwardingSubgraph& fs, const Topology& topo);
void walk_direct_roundtrip(const ForwardingSubgraph& fs, const Topology& topo);

}  // namespace fsroute::testing
