#include "fsroute/topology.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <queue>
#include <sstream>
#include <tuple>

namespace fsroute {

std::uint8_t label_width_for_degree(std::size_t degree) {
  if (degree <= 1) return 0;
  std::uint8_t w = 0;
  std::size_t capacity = 1;
  while (capacity < degree) {
    capacity <<= 1;
    ++w;
  }
  return w;
}

void Topology::require_node(NodeId u) const {
  if (!has_node(u)) {
    throw TopologyError("unknown node id " + std::to_string(u));
  }
}

const Topology::OutEdge* Topology::find_out_edge(NodeId u, NodeId v) const {
  require_node(u);
  const auto& edges = out_[u];
  auto it = std::lower_bound(edges.begin(), edges.end(), v,
                             [](const OutEdge& e, NodeId id) { return e.dst < id; });
  if (it != edges.end() && it->dst == v) return &*it;
  return nullptr;
}

double Topology::link_latency(NodeId u, NodeId v) const {
  const OutEdge* e = find_out_edge(u, v);
  if (!e) {
    throw TopologyError("no link " + std::to_string(u) + "->" + std::to_string(v));
  }
  return e->latency;
}

Label Topology::label_of(NodeId u, NodeId v) const {
  require_node(u);
  const auto& edges = out_[u];
  auto it = std::lower_bound(edges.begin(), edges.end(), v,
                             [](const OutEdge& e, NodeId id) { return e.dst < id; });
  if (it == edges.end() || it->dst != v) {
    throw TopologyError("no link " + std::to_string(u) + "->" + std::to_string(v));
  }
  return Label{static_cast<std::uint32_t>(it - edges.begin()), label_width(u)};
}

std::optional<NodeId> Topology::neighbor_by_label(NodeId u, std::uint32_t value) const {
  require_node(u);
  const auto& edges = out_[u];
  if (value >= edges.size()) return std::nullopt;
  return edges[value].dst;
}

std::vector<std::tuple<NodeId, NodeId, double>> Topology::all_links() const {
  std::vector<std::tuple<NodeId, NodeId, double>> links;
  links.reserve(link_count_);
  for (NodeId u = 0; u < out_.size(); ++u) {
    for (const OutEdge& e : out_[u]) links.emplace_back(u, e.dst, e.latency);
  }
  return links;
}

Topology& assign_labels(Topology& topo) {
  for (NodeId u = 0; u < topo.out_.size(); ++u) {
    auto& edges = topo.out_[u];
    std::sort(edges.begin(), edges.end(),
              [](const Topology::OutEdge& a, const Topology::OutEdge& b) { return a.dst < b.dst; });
    for (std::size_t i = 1; i < edges.size(); ++i) {
      if (edges[i].dst == edges[i - 1].dst) {
        throw TopologyError("duplicate link " + std::to_string(u) + "->" +
                            std::to_string(edges[i].dst));
      }
    }
    auto& ins = topo.in_[u];
    std::sort(ins.begin(), ins.end(),
              [](const Topology::InEdge& a, const Topology::InEdge& b) { return a.src < b.src; });
  }
  topo.finalized_ = true;
  return topo;
}

Topology Topology::from_links(std::size_t node_count,
                              const std::vector<std::tuple<NodeId, NodeId, double>>& links,
                              bool weighted) {
  Topology topo;
  for (const auto& [u, v, w] : links) {
    node_count = std::max<std::size_t>(node_count, std::max(u, v) + 1);
  }
  topo.out_.resize(node_count);
  topo.in_.resize(node_count);
  topo.weighted_ = weighted;
  for (const auto& [u, v, w] : links) {
    if (u == v) throw TopologyError("self-loop at node " + std::to_string(u));
    if (w < 0.0) throw TopologyError("negative latency on " + std::to_string(u) + "->" +
                                     std::to_string(v));
    topo.out_[u].push_back({v, w});
    topo.in_[v].push_back({u, w});
    ++topo.link_count_;
  }
  assign_labels(topo);
  return topo;
}

namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace

Topology parse_topology(std::istream& in, const std::string& name) {
  std::vector<std::tuple<NodeId, NodeId, double>> links;
  bool weighted = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(strip_comment(line));
    std::string tok_src, tok_dst, tok_lat, extra;
    if (!(ls >> tok_src)) continue;  // blank or comment-only line
    auto fail = [&](const std::string& what) -> TopologyError {
      return TopologyError(name + ":" + std::to_string(lineno) + ": " + what);
    };
    if (!(ls >> tok_dst)) throw fail("expected \"src dst [latency]\"");
    long long src = 0, dst = 0;
    double lat = 1.0;
    try {
      std::size_t used = 0;
      src = std::stoll(tok_src, &used);
      if (used != tok_src.size()) throw std::invalid_argument(tok_src);
      dst = std::stoll(tok_dst, &used);
      if (used != tok_dst.size()) throw std::invalid_argument(tok_dst);
    } catch (const std::exception&) {
      throw fail("bad node id");
    }
    if (src < 0 || dst < 0) throw fail("negative node id");
    if (src == dst) throw fail("self-loop on node " + std::to_string(src));
    if (ls >> tok_lat) {
      try {
        std::size_t used = 0;
        lat = std::stod(tok_lat, &used);
        if (used != tok_lat.size()) throw std::invalid_argument(tok_lat);
      } catch (const std::exception&) {
        throw fail("bad latency \"" + tok_lat + "\"");
      }
      if (lat < 0.0) throw fail("negative latency");
      weighted = true;
    }
    if (ls >> extra) throw fail("trailing token \"" + extra + "\"");
    links.emplace_back(static_cast<NodeId>(src), static_cast<NodeId>(dst), lat);
  }
  // Duplicate detection before from_links so the error carries the file name.
  {
    std::vector<std::pair<NodeId, NodeId>> seen;
    seen.reserve(links.size());
    for (const auto& [u, v, w] : links) seen.emplace_back(u, v);
    std::sort(seen.begin(), seen.end());
    auto dup = std::adjacent_find(seen.begin(), seen.end());
    if (dup != seen.end()) {
      throw TopologyError(name + ": duplicate link " + std::to_string(dup->first) + "->" +
                          std::to_string(dup->second));
    }
  }
  return Topology::from_links(0, links, weighted);
}

Topology load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TopologyError("cannot open topology file " + path);
  return parse_topology(in, path);
}

bool Removed::link_removed(NodeId u, NodeId v) const {
  for (const LinkRef& l : links) {
    if (l.src == u && l.dst == v) return true;
  }
  return false;
}

bool Removed::node_removed(NodeId u) const {
  for (NodeId n : nodes) {
    if (n == u) return true;
  }
  return false;
}

namespace {

struct HeapItem {
  double dist;
  std::uint32_t hops;
  NodeId node;

  bool operator>(const HeapItem& o) const {
    if (dist != o.dist) return dist > o.dist;
    if (hops != o.hops) return hops > o.hops;
    return node > o.node;
  }
};

using MinHeap = std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<HeapItem>>;

}  // namespace

ShortestToDest shortest_to_dest(const Topology& topo, NodeId dest, const Removed& removed,
                                NodeId stop_at) {
  topo.require_node(dest);
  const std::size_t n = topo.node_count();
  ShortestToDest sd;
  sd.dest = dest;
  sd.dist.assign(n, std::numeric_limits<double>::infinity());
  sd.hops.assign(n, 0);
  sd.reached.assign(n, 0);
  if (removed.node_removed(dest)) return sd;

  std::vector<std::uint8_t> done(n, 0);
  MinHeap heap;
  sd.dist[dest] = 0.0;
  sd.hops[dest] = 0;
  sd.reached[dest] = 1;
  heap.push({0.0, 0, dest});
  while (!heap.empty()) {
    auto [du, hu, x] = heap.top();
    heap.pop();
    if (done[x]) continue;
    done[x] = 1;
    if (x == stop_at) break;
    for (const Topology::InEdge& e : topo.in_edges(x)) {
      NodeId u = e.src;
      if (done[u] || removed.node_removed(u) || removed.link_removed(u, x)) continue;
      double cand = sd.dist[x] + e.latency;
      std::uint32_t cand_hops = sd.hops[x] + 1;
      if (!sd.reached[u] || cand < sd.dist[u] ||
          (cand == sd.dist[u] && cand_hops < sd.hops[u])) {
        sd.dist[u] = cand;
        sd.hops[u] = cand_hops;
        sd.reached[u] = 1;
        heap.push({cand, cand_hops, u});
      }
    }
  }
  return sd;
}

std::optional<NodeId> canonical_step(const Topology& topo, const ShortestToDest& sd,
                                     NodeId u, const Removed& removed) {
  if (u == sd.dest || !sd.ok(u)) return std::nullopt;
  for (const Topology::OutEdge& e : topo.out_edges(u)) {  // sorted by dst: first hit is smallest
    if (removed.node_removed(e.dst) || removed.link_removed(u, e.dst)) continue;
    if (!sd.ok(e.dst)) continue;
    if (sd.dist[e.dst] + e.latency == sd.dist[u] && sd.hops[e.dst] + 1 == sd.hops[u]) {
      return e.dst;
    }
  }
  return std::nullopt;
}

std::optional<PathResult> shortest_path(const Topology& topo, NodeId s, NodeId d,
                                        const Removed& removed) {
  topo.require_node(s);
  topo.require_node(d);
  if (removed.node_removed(s) || removed.node_removed(d)) return std::nullopt;
  ShortestToDest sd = shortest_to_dest(topo, d, removed, s);
  if (!sd.ok(s)) return std::nullopt;
  PathResult out;
  out.nodes.push_back(s);
  out.latency = sd.dist[s];
  out.hops = sd.hops[s];
  NodeId cur = s;
  while (cur != d) {
    auto next = canonical_step(topo, sd, cur, removed);
    if (!next) throw TopologyError("internal: canonical walk stalled");
    out.nodes.push_back(*next);
    cur = *next;
  }
  return out;
}

ShortestFromSource shortest_from_source(const Topology& topo, NodeId s, const Removed& removed) {
  topo.require_node(s);
  const std::size_t n = topo.node_count();
  ShortestFromSource sf;
  sf.source = s;
  sf.dist.assign(n, std::numeric_limits<double>::infinity());
  sf.hops.assign(n, 0);
  sf.reached.assign(n, 0);
  if (removed.node_removed(s)) return sf;

  std::vector<std::uint8_t> done(n, 0);
  MinHeap heap;
  sf.dist[s] = 0.0;
  sf.reached[s] = 1;
  heap.push({0.0, 0, s});
  while (!heap.empty()) {
    auto [du, hu, x] = heap.top();
    heap.pop();
    if (done[x]) continue;
    done[x] = 1;
    for (const Topology::OutEdge& e : topo.out_edges(x)) {
      NodeId v = e.dst;
      if (done[v] || removed.node_removed(v) || removed.link_removed(x, v)) continue;
      double cand = sf.dist[x] + e.latency;
      std::uint32_t cand_hops = sf.hops[x] + 1;
      if (!sf.reached[v] || cand < sf.dist[v] ||
          (cand == sf.dist[v] && cand_hops < sf.hops[v])) {
        sf.dist[v] = cand;
        sf.hops[v] = cand_hops;
        sf.reached[v] = 1;
        heap.push({cand, cand_hops, v});
      }
    }
  }
  return sf;
}

bool is_biconnected(const Topology& topo) {
  const std::size_t n = topo.node_count();
  if (n < 3) return false;
  std::vector<std::vector<NodeId>> adj(n);
  for (NodeId u = 0; u < n; ++u) {
    for (const auto& e : topo.out_edges(u)) {
      adj[u].push_back(e.dst);
      adj[e.dst].push_back(u);
    }
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }

  std::vector<int> disc(n, -1), low(n, 0), parent(n, -1);
  std::vector<std::size_t> edge_pos(n, 0);
  int timer = 0;
  bool has_articulation = false;
  std::size_t visited = 0;

  std::vector<NodeId> stack;
  stack.push_back(0);
  disc[0] = low[0] = timer++;
  ++visited;
  int root_children = 0;
  while (!stack.empty()) {
    NodeId u = stack.back();
    if (edge_pos[u] < adj[u].size()) {
      NodeId v = adj[u][edge_pos[u]++];
      if (disc[v] == -1) {
        parent[v] = static_cast<int>(u);
        disc[v] = low[v] = timer++;
        ++visited;
        if (u == 0) ++root_children;
        stack.push_back(v);
      } else if (static_cast<int>(v) != parent[u]) {
        low[u] = std::min(low[u], disc[v]);
      }
    } else {
      stack.pop_back();
      if (!stack.empty()) {
        NodeId p = stack.back();
        low[p] = std::min(low[p], low[u]);
        if (p != 0 && low[u] >= disc[p]) has_articulation = true;
      }
    }
  }
  if (visited != n) return false;  // disconnected (isolated nodes count)
  if (root_children > 1) return false;  // DFS root is an articulation point
  return !has_articulation;
}

}  // namespace fsroute
