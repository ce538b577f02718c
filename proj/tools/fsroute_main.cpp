// fsroute: build failure-avoiding forwarding subgraphs, encode them into
// packet headers, forward packets under injected failures, and evaluate
// header sizes and failure-reaction stretch.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "fsroute/bounds.hpp"
#include "fsroute/codec_default.hpp"
#include "fsroute/codec_direct.hpp"
#include "fsroute/failsim.hpp"
#include "fsroute/forward.hpp"
#include "fsroute/fs.hpp"
#include "fsroute/topology.hpp"

namespace {

using namespace fsroute;

constexpr int kExitOk = 0;
constexpr int kExitDropped = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDataError = 3;

struct Options {
  std::string topo_path;
  std::uint64_t seed = 1;
  std::string format = "default";
  std::string preset;
  std::string out_path;

  std::string model = "link";
  std::string srlg_path;

  NodeId src = 0;
  NodeId dst = 0;
  std::vector<std::string> failures;

  std::string in_path;

  // eval sizes
  std::size_t all_pairs_threshold = 1000;
  std::size_t sampled_pairs = 100000;

  // eval stretch
  std::string schemes = "flooded-sp,fast-sp,e2e-sp,fast-vsr,ideal-safeguard,ideal-ncr";
  std::size_t n_links = 100;
  std::size_t n_sources = 20;
  std::size_t n_destinations = 20;
  double t0 = 0.0, fib_delay = 0.0, relay_delay = 0.0, gen_interval = 1.0;
  std::optional<double> horizon;

  // bounds
  std::size_t k = 1;
  std::string variant = "both";
  std::string emit_graph;
};

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output file " + path);
  return file;
}

FailureModel make_model(const Options& opt) {
  if (opt.model == "link") return FailureModel::single_link();
  if (opt.model == "node") return FailureModel::single_node();
  if (opt.model == "srlg") {
    if (opt.srlg_path.empty()) throw CLI::ValidationError("--model srlg requires --srlg-file");
    return FailureModel::srlg(load_srlg_groups(opt.srlg_path));
  }
  throw CLI::ValidationError("unknown failure model " + opt.model);
}

LinkRef parse_link_token(const std::string& tok) {
  auto dash = tok.find('-');
  if (dash == std::string::npos) throw std::runtime_error("bad failure token \"" + tok + "\"");
  try {
    std::size_t used = 0;
    long long a = std::stoll(tok.substr(0, dash), &used);
    if (used != dash) throw std::invalid_argument(tok);
    long long b = std::stoll(tok.substr(dash + 1), &used);
    if (used != tok.size() - dash - 1 || a < 0 || b < 0) throw std::invalid_argument(tok);
    return LinkRef{static_cast<NodeId>(a), static_cast<NodeId>(b)};
  } catch (const std::invalid_argument&) {
    throw std::runtime_error("bad failure token \"" + tok + "\"");
  }
}

TimingParams resolve_params(const Options& opt) {
  if (!opt.preset.empty()) {
    auto p = preset_params(opt.preset);
    if (!p) {
      throw std::runtime_error("unknown preset \"" + opt.preset + "\" (have: " + preset_names() +
                               ")");
    }
    return *p;
  }
  return TimingParams{opt.t0, opt.fib_delay, opt.relay_delay, opt.gen_interval};
}

std::string label_str(const Label& l) {
  std::string bits;
  for (unsigned i = l.width; i-- > 0;) bits.push_back((l.value >> i & 1) ? '1' : '0');
  return std::to_string(l.value) + "/" + std::to_string(l.width) +
         (l.width ? " (" + bits + ")" : " (empty)");
}

// ---------------------------------------------------------------- vectors --

constexpr std::uint8_t kTagDefault = 0x00;
constexpr std::uint8_t kTagDirect = 0x01;

void write_vector_file(std::ostream& os, const Options& opt, const BitString& wire) {
  BitString tagged;
  tagged.append(opt.format == "direct" ? kTagDirect : kTagDefault, 8);
  tagged.append_bits(wire, 0, wire.size());
  os << "# fsroute header vector\n";
  os << "format: " << opt.format << "\n";
  os << "topology: " << opt.topo_path << "\n";
  os << "source: " << opt.src << "\n";
  os << "dest: " << opt.dst << "\n";
  os << "bits: " << wire.size() << "\n";
  os << "hex: " << tagged.to_hex() << "\n";
}

struct VectorFile {
  std::string format;
  std::string topology;
  NodeId source = 0;
  NodeId dest = 0;
  std::size_t bits = 0;
  BitString wire;
};

VectorFile read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vector file " + path);
  VectorFile v;
  std::string line, hex;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw std::runtime_error("bad vector line: " + line);
    std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 1);
    while (!value.empty() && value.front() == ' ') value.erase(value.begin());
    if (key == "format") v.format = value;
    else if (key == "topology") v.topology = value;
    else if (key == "source") v.source = static_cast<NodeId>(std::stoull(value));
    else if (key == "dest") v.dest = static_cast<NodeId>(std::stoull(value));
    else if (key == "bits") v.bits = std::stoull(value);
    else if (key == "hex") hex = value;
    else throw std::runtime_error("unknown vector key \"" + key + "\"");
  }
  if (hex.size() < 2) throw std::runtime_error("vector file has no hex payload");
  BitString tagged = BitString::from_hex(hex, 8 + v.bits);
  std::uint8_t tag = static_cast<std::uint8_t>(tagged.read(0, 8));
  if ((tag == kTagDirect) != (v.format == "direct")) {
    throw std::runtime_error("format tag byte disagrees with the format line");
  }
  v.wire = tagged.slice(8, v.bits);
  return v;
}

// ------------------------------------------------------------- subcommands --

int cmd_fs(const Options& opt) {
  Topology topo = load_topology(opt.topo_path);
  ForwardingSubgraph fs = build_fs(topo, opt.src, opt.dst, make_model(opt));
  std::ofstream file;
  open_output(file, opt.out_path) << fs.dump(topo);
  return kExitOk;
}

int cmd_encode(const Options& opt) {
  Topology topo = load_topology(opt.topo_path);
  ForwardingSubgraph fs = build_fs(topo, opt.src, opt.dst, make_model(opt));
  BitString wire = opt.format == "direct" ? serialize_direct(encode_direct(fs, topo))
                                          : serialize_default(encode_default(fs, topo));
  std::ofstream file;
  write_vector_file(open_output(file, opt.out_path), opt, wire);
  return kExitOk;
}

void print_default_walk(std::ostream& os, const VectorFile& v, const Topology& topo) {
  DefaultHeader header = parse_default(v.wire);
  os << "format: default\nbits: " << v.bits << "\n";
  NodeId current = v.source;
  std::size_t index = 0;
  while (true) {
    DefaultDecode dec = decode_default(header, topo, current);
    if (dec.at_destination) {
      os << "destination: " << current << "\n";
      return;
    }
    if (dec.alternate_label) {  // a mid-flight header already on its alternate
      NodeId next = *topo.neighbor_by_label(current, dec.alternate_label->value);
      os << "label " << index++ << " node " << current << ": "
         << label_str(*dec.alternate_label) << " next=" << next << "\n";
      header.body = header.body.slice(dec.alternate_label->width,
                                      header.body.size() - dec.alternate_label->width);
      header.header_length = static_cast<std::uint16_t>(header.body.size());
      current = next;
      continue;
    }
    const DefaultSegmentView& seg = *dec.segment;
    NodeId next = *topo.neighbor_by_label(current, seg.primary.value);
    os << "segment " << index++ << " node " << current << ": p=" << label_str(seg.primary)
       << " next=" << next;
    if (seg.has_alternate) {
      os << " alt_bits=" << seg.alt_bits.size() << " alt=[";
      NodeId walker = current;
      std::size_t pos = 0;
      bool first = true;
      while (pos < seg.alt_bits.size()) {
        std::uint8_t w = topo.label_width(walker);
        std::uint32_t value = static_cast<std::uint32_t>(seg.alt_bits.read(pos, w));
        pos += w;
        auto hop = topo.neighbor_by_label(walker, value);
        if (!hop) throw CodecError("alternate label not advertised");
        os << (first ? "" : " ") << *hop;
        first = false;
        walker = *hop;
      }
      os << "]";
    } else {
      os << " alt=none";
    }
    os << "\n";
    header.body = header.body.slice(seg.segment_bits, header.body.size() - seg.segment_bits);
    header.header_length = static_cast<std::uint16_t>(header.body.size());
    current = next;
  }
}

void print_direct_walk(std::ostream& os, const VectorFile& v, const Topology& topo) {
  DirectHeader header = parse_direct(v.wire);
  os << "format: direct\nbits: " << v.bits << "\nptr_width: " << int(header.ptr_width)
     << "\nstart: " << header.current_ptr << "\n";
  // Walk the pointer graph; owners (physical nodes) ride along. The map
  // keeps the printout sorted by ND offset.
  std::map<std::size_t, NodeId> owners{{header.current_ptr, v.source}};
  std::set<std::size_t> done;
  while (true) {
    std::size_t offset = 0;
    NodeId node = kNoNode;
    bool found = false;
    for (const auto& [off, owner] : owners) {
      if (!done.count(off)) {
        offset = off;
        node = owner;
        found = true;
        break;
      }
    }
    if (!found) break;
    done.insert(offset);
    DirectHeader at = header;
    at.current_ptr = static_cast<std::uint32_t>(offset);
    DirectStep step = decode_direct_step(at, topo, node);
    os << "nd " << offset << " node " << node << ":";
    auto show = [&](const char* name, const DirectSuccessor& sd) {
      NodeId next = *topo.neighbor_by_label(node, sd.label.value);
      os << " " << name << " label " << label_str(sd.label) << " -> " << next << " ptr "
         << sd.next_ptr << ";";
      if (sd.next_ptr != 0) owners.emplace(sd.next_ptr, next);
    };
    show("sd1", step.primary);
    if (step.secondary) show("sd2", *step.secondary);
    os << "\n";
  }
}

int cmd_decode(const Options& opt) {
  VectorFile v = read_vector_file(opt.in_path);
  std::string topo_path = opt.topo_path.empty() ? v.topology : opt.topo_path;
  Topology topo = load_topology(topo_path);
  std::ofstream file;
  std::ostream& os = open_output(file, opt.out_path);
  if (v.format == "direct") {
    print_direct_walk(os, v, topo);
  } else {
    print_default_walk(os, v, topo);
  }
  return kExitOk;
}

int cmd_trace(const Options& opt) {
  Topology topo = load_topology(opt.topo_path);
  ForwardingSubgraph fs = build_fs(topo, opt.src, opt.dst, make_model(opt));
  FailedSet failed;
  for (const std::string& tok : opt.failures) {
    LinkRef l = parse_link_token(tok);
    if (!topo.has_node(l.src) || !topo.has_node(l.dst) ||
        (!topo.find_out_edge(l.src, l.dst) && !topo.find_out_edge(l.dst, l.src))) {
      throw std::runtime_error("failure token names a non-existent link " + tok);
    }
    failed.fail_link(l.src, l.dst);
  }
  PacketTrace trace;
  if (opt.format == "direct") {
    trace = forward_packet(encode_direct(fs, topo), topo, opt.src, failed);
  } else {
    trace = forward_packet(encode_default(fs, topo), topo, opt.src, failed);
  }
  std::ofstream file;
  std::ostream& os = open_output(file, opt.out_path);
  for (std::size_t i = 0; i < trace.hops.size(); ++i) {
    const Hop& h = trace.hops[i];
    os << "hop " << i << ": " << h.node << " -[" << label_str(h.label) << "]-> " << h.next << " "
       << (h.mode == HopMode::Primary ? "primary" : "alternate") << "\n";
  }
  if (trace.delivered) {
    os << "delivered at " << trace.final_node << " latency " << format_ms(trace.latency) << "\n";
    return kExitOk;
  }
  os << "dropped at " << trace.final_node << ": " << trace.drop_reason << " latency "
     << format_ms(trace.latency) << "\n";
  return kExitDropped;
}

int cmd_eval_sizes(const Options& opt) {
  Topology topo = load_topology(opt.topo_path);
  const std::size_t n = topo.node_count();

  std::vector<std::pair<NodeId, NodeId>> pairs;
  bool sampled = n > opt.all_pairs_threshold;
  if (!sampled) {
    for (NodeId s = 0; s < n; ++s) {
      for (NodeId d = 0; d < n; ++d) {
        if (s != d) pairs.emplace_back(s, d);
      }
    }
  } else {
    std::mt19937_64 rng(opt.seed);
    std::set<std::pair<NodeId, NodeId>> seen;
    while (seen.size() < opt.sampled_pairs) {
      NodeId s = static_cast<NodeId>(rng() % n);
      NodeId d = static_cast<NodeId>(rng() % n);
      if (s != d) seen.insert({s, d});
      if (seen.size() >= static_cast<std::size_t>(n) * (n - 1)) break;
    }
    pairs.assign(seen.begin(), seen.end());
  }

  std::ofstream file;
  std::ostream& os = open_output(file, opt.out_path);
  os << "# topology: " << opt.topo_path << "\n";
  os << "# seed: " << opt.seed << "\n";
  os << "# mode: " << (sampled ? "sampled" : "all-pairs") << "\n";
  os << "src,dst,default_bytes,direct_bytes,fs_edges,lb_edges\n";
  for (auto [s, d] : pairs) {
    ForwardingSubgraph fs;
    try {
      fs = build_fs(topo, s, d);
    } catch (const FsError&) {
      continue;  // disconnected pair
    }
    os << s << ',' << d << ',';
    try {
      os << default_size_bytes(fs, topo);
    } catch (const CodecError&) {
      os << '-';  // alternate labels beyond the 127-bit length field
    }
    os << ',';
    try {
      os << direct_size_bytes(fs, topo);
    } catch (const CodecError&) {
      os << '-';
    }
    os << ',' << fs.edge_count() << ','
       << lower_bound_edges(fs.primary_hops(), topo.weighted()) << "\n";
  }
  return kExitOk;
}

int cmd_eval_stretch(const Options& opt) {
  Topology topo = load_topology(opt.topo_path);
  TimingParams params = resolve_params(opt);

  std::vector<Scheme> schemes;
  std::stringstream ss(opt.schemes);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto s = scheme_from_token(tok);
    if (!s) throw std::runtime_error("unknown scheme \"" + tok + "\"");
    schemes.push_back(*s);
  }
  if (schemes.empty()) throw std::runtime_error("no schemes selected");

  SampleCounts counts;
  counts.links = opt.n_links;
  counts.sources = opt.n_sources;
  counts.destinations = opt.n_destinations;
  auto triples = sample_triples(topo, opt.seed, counts);
  if (triples.empty()) std::cerr << "warning: no qualified (l0, s, d) triples sampled\n";

  EvalResult result = run_eval(topo, triples, schemes, params, opt.horizon);
  if (!result.warning.empty()) std::cerr << "warning: " << result.warning << "\n";

  std::ostringstream params_str;
  params_str << "t0=" << format_ms(params.t0) << " D=" << format_ms(params.fib_delay)
             << " d_r=" << format_ms(params.relay_delay)
             << " gen_interval=" << format_ms(params.gen_interval);
  std::ostringstream counts_str;
  counts_str << "links=" << counts.links << " sources=" << counts.sources
             << " destinations=" << counts.destinations << " triples=" << triples.size();

  std::ofstream file;
  write_stretch_csv(open_output(file, opt.out_path), result,
                    {{"topology", opt.topo_path},
                     {"seed", std::to_string(opt.seed)},
                     {"params", params_str.str()},
                     {"schemes", opt.schemes},
                     {"counts", counts_str.str()}});
  return kExitOk;
}

int cmd_bounds(const Options& opt) {
  std::ofstream file;
  std::ostream& os = open_output(file, opt.out_path);
  auto run_variant = [&](bool weighted) {
    WitnessGraph w = weighted ? witness_weighted(opt.k) : witness_unweighted(opt.k);
    ForwardingSubgraph fs = build_fs(w.topo, w.s, w.d);
    os << (weighted ? "weighted" : "unweighted") << " k=" << opt.k
       << " lower_bound=" << lower_bound_edges(opt.k, weighted)
       << " witness_fs_edges=" << fs.edge_count() << "\n";
    if (!opt.emit_graph.empty()) {
      std::ofstream g(opt.emit_graph);
      if (!g) throw std::runtime_error("cannot open " + opt.emit_graph);
      g << "# tightness witness, " << (weighted ? "weighted" : "unweighted") << ", k=" << opt.k
        << ", s=" << w.s << ", d=" << w.d << "\n";
      for (auto [u, v, lat] : w.topo.all_links()) {
        g << u << ' ' << v;
        if (weighted) g << ' ' << format_ms(lat);
        g << "\n";
      }
    }
  };
  if (opt.variant == "both") {
    if (!opt.emit_graph.empty()) {
      throw CLI::ValidationError("--emit-graph needs --variant weighted or unweighted");
    }
    run_variant(true);
    run_variant(false);
  } else if (opt.variant == "weighted") {
    run_variant(true);
  } else {
    run_variant(false);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"source-routed fast-failover toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--topo", opt.topo_path, "topology edge-list file");
  app.add_option("--seed", opt.seed, "RNG seed for sampling");
  app.add_option("--format", opt.format, "header format: default or direct")
      ->check(CLI::IsMember({"default", "direct"}));
  app.add_option("--preset", opt.preset, "timing preset: " + preset_names());
  app.add_option("--out", opt.out_path, "output file (stdout when absent)");

  CLI::App* fs_cmd = app.add_subcommand("fs", "build and dump a forwarding subgraph");
  CLI::App* encode_cmd = app.add_subcommand("encode", "encode an FS into a header vector");
  CLI::App* decode_cmd = app.add_subcommand("decode", "decode and print a header vector");
  CLI::App* trace_cmd = app.add_subcommand("trace", "forward a packet under failures");
  CLI::App* eval_cmd = app.add_subcommand("eval", "batch evaluations");
  CLI::App* bounds_cmd = app.add_subcommand("bounds", "FS-size lower bounds and witnesses");

  auto add_model = [&](CLI::App* cmd) {
    cmd->add_option("--model", opt.model, "failure model: link, node or srlg")
        ->check(CLI::IsMember({"link", "node", "srlg"}));
    cmd->add_option("--srlg-file", opt.srlg_path, "SRLG groups, one per line");
  };

  fs_cmd->add_option("src", opt.src, "source node")->required();
  fs_cmd->add_option("dst", opt.dst, "destination node")->required();
  add_model(fs_cmd);

  encode_cmd->add_option("src", opt.src)->required();
  encode_cmd->add_option("dst", opt.dst)->required();
  add_model(encode_cmd);

  decode_cmd->add_option("--in", opt.in_path, "vector file from encode")->required();

  trace_cmd->add_option("src", opt.src)->required();
  trace_cmd->add_option("dst", opt.dst)->required();
  trace_cmd->add_option("--fail", opt.failures, "failed link as src-dst (repeatable)");
  add_model(trace_cmd);

  eval_cmd->require_subcommand(1);
  CLI::App* sizes_cmd = eval_cmd->add_subcommand("sizes", "per-pair header sizes and FS sizes");
  sizes_cmd->add_option("--all-pairs-threshold", opt.all_pairs_threshold,
                        "all pairs when the node count is at most this");
  sizes_cmd->add_option("--pairs", opt.sampled_pairs, "sampled pair count above the threshold");
  CLI::App* stretch_cmd = eval_cmd->add_subcommand("stretch", "stretch vs generation time");
  stretch_cmd->add_option("--schemes", opt.schemes, "comma-separated scheme list");
  stretch_cmd->add_option("--links", opt.n_links, "links to sample");
  stretch_cmd->add_option("--sources", opt.n_sources, "qualified sources per link");
  stretch_cmd->add_option("--destinations", opt.n_destinations, "destinations per source");
  stretch_cmd->add_option("--t0", opt.t0, "failure time, ms");
  stretch_cmd->add_option("--fib-delay", opt.fib_delay, "D: FIB-ready delay, ms");
  stretch_cmd->add_option("--relay-delay", opt.relay_delay, "d_r: per-hop control delay, ms");
  stretch_cmd->add_option("--gen-interval", opt.gen_interval, "packet generation interval, ms");
  double horizon_value = -1.0;
  stretch_cmd->add_option("--horizon", horizon_value, "cut the series at this time, ms");

  bounds_cmd->add_option("k", opt.k, "primary path hop count")->required();
  bounds_cmd->add_option("--variant", opt.variant, "weighted, unweighted or both")
      ->check(CLI::IsMember({"weighted", "unweighted", "both"}));
  bounds_cmd->add_option("--emit-graph", opt.emit_graph, "write the witness as an edge list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  auto need_topo = [&]() {
    if (opt.topo_path.empty()) {
      std::cerr << "error: --topo is required for this command\n";
      return false;
    }
    return true;
  };

  try {
    if (stretch_cmd->parsed() && horizon_value >= 0.0) opt.horizon = horizon_value;
    if (fs_cmd->parsed()) return need_topo() ? cmd_fs(opt) : kExitUsage;
    if (encode_cmd->parsed()) return need_topo() ? cmd_encode(opt) : kExitUsage;
    if (decode_cmd->parsed()) return cmd_decode(opt);
    if (trace_cmd->parsed()) return need_topo() ? cmd_trace(opt) : kExitUsage;
    if (eval_cmd->parsed()) {
      if (!need_topo()) return kExitUsage;
      if (sizes_cmd->parsed()) return cmd_eval_sizes(opt);
      if (stretch_cmd->parsed()) return cmd_eval_stretch(opt);
    }
    if (bounds_cmd->parsed()) return cmd_bounds(opt);
    std::cerr << "error: no subcommand\n";
    return kExitUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataError;
  }
}
