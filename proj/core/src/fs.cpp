#include "fsroute/fs.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

namespace fsroute {

std::vector<std::vector<LinkRef>> parse_srlg_groups(std::istream& in, const std::string& name) {
  std::vector<std::vector<LinkRef>> groups;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<LinkRef> group;
    std::string tok;
    while (ls >> tok) {
      auto dash = tok.find('-');
      if (dash == std::string::npos || dash == 0 || dash + 1 == tok.size()) {
        throw FsError(name + ":" + std::to_string(lineno) + ": bad link token \"" + tok + "\"");
      }
      try {
        std::size_t used = 0;
        long long a = std::stoll(tok.substr(0, dash), &used);
        if (used != dash) throw std::invalid_argument(tok);
        long long b = std::stoll(tok.substr(dash + 1), &used);
        if (used != tok.size() - dash - 1) throw std::invalid_argument(tok);
        if (a < 0 || b < 0) throw std::invalid_argument(tok);
        group.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b)});
      } catch (const std::invalid_argument&) {
        throw FsError(name + ":" + std::to_string(lineno) + ": bad link token \"" + tok + "\"");
      }
    }
    if (!group.empty()) groups.push_back(std::move(group));
  }
  return groups;
}

std::vector<std::vector<LinkRef>> load_srlg_groups(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FsError("cannot open SRLG group file " + path);
  return parse_srlg_groups(in, path);
}

std::size_t ForwardingSubgraph::edge_count() const {
  std::size_t n = 0;
  for (const FsNode& node : nodes) {
    if (node.next_primary) ++n;
    if (node.next_alternate) ++n;
  }
  return n;
}

std::size_t fs_edge_count(const ForwardingSubgraph& fs) { return fs.edge_count(); }

std::vector<Label> ForwardingSubgraph::alternate_labels(std::size_t i, const Topology& topo) const {
  std::vector<Label> labels;
  const auto& path = alternates.at(i);
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    labels.push_back(topo.label_of(nodes[path[k]].physical, nodes[path[k + 1]].physical));
  }
  return labels;
}

std::size_t ForwardingSubgraph::alternate_label_bits(std::size_t i, const Topology& topo) const {
  std::size_t bits = 0;
  const auto& path = alternates.at(i);
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    bits += topo.label_width(nodes[path[k]].physical);
  }
  return bits;
}

std::vector<FsNodeRef> ForwardingSubgraph::topological_order() const {
  std::vector<std::uint32_t> indegree(nodes.size(), 0);
  for (const FsNode& node : nodes) {
    if (node.next_primary) ++indegree[*node.next_primary];
    if (node.next_alternate) ++indegree[*node.next_alternate];
  }
  auto order_key = [&](FsNodeRef r) {
    return std::pair<NodeId, std::uint32_t>(nodes[r].physical, nodes[r].copy_index);
  };
  auto cmp = [&](FsNodeRef a, FsNodeRef b) { return order_key(a) > order_key(b); };
  std::priority_queue<FsNodeRef, std::vector<FsNodeRef>, decltype(cmp)> ready(cmp);
  for (FsNodeRef r = 0; r < nodes.size(); ++r) {
    if (indegree[r] == 0) ready.push(r);
  }
  std::vector<FsNodeRef> order;
  order.reserve(nodes.size());
  while (!ready.empty()) {
    FsNodeRef r = ready.top();
    ready.pop();
    order.push_back(r);
    for (auto succ : {nodes[r].next_primary, nodes[r].next_alternate}) {
      if (succ && --indegree[*succ] == 0) ready.push(*succ);
    }
  }
  if (order.size() != nodes.size()) throw FsError("forwarding subgraph contains a cycle");
  return order;
}

std::string ForwardingSubgraph::node_token(FsNodeRef r) const {
  const FsNode& n = nodes[r];
  std::string tok = std::to_string(n.physical);
  if (n.copy_index > 0) tok += "~" + std::to_string(n.copy_index);
  return tok;
}

std::string ForwardingSubgraph::dump(const Topology& topo) const {
  (void)topo;
  std::ostringstream os;
  auto order = topological_order();
  os << "source " << source_physical() << "\n";
  os << "dest " << destination_physical() << "\n";
  os << "nodes " << nodes.size() << "\n";
  for (FsNodeRef r : order) os << "node " << node_token(r) << "\n";
  os << "edges " << edge_count() << "\n";
  for (FsNodeRef r : order) {
    if (nodes[r].next_primary) {
      os << "edge " << node_token(r) << " -> " << node_token(*nodes[r].next_primary)
         << " primary\n";
    }
    if (nodes[r].next_alternate) {
      os << "edge " << node_token(r) << " -> " << node_token(*nodes[r].next_alternate)
         << " alternate\n";
    }
  }
  os << "primary";
  for (FsNodeRef r : primary) os << " " << node_token(r);
  os << "\n";
  for (std::size_t i = 0; i + 1 < primary.size(); ++i) {
    os << "alt " << i << " at " << node_token(primary[i]);
    if (alternates[i].empty()) {
      os << " -";
    } else {
      for (FsNodeRef r : alternates[i]) os << " " << node_token(r);
    }
    os << "\n";
  }
  return os.str();
}

void ForwardingSubgraph::validate(const Topology& topo) const {
  if (primary.size() < 2) throw FsError("primary path too short");
  if (alternates.size() != primary.size() - 1) throw FsError("alternate table size mismatch");
  topological_order();  // throws on cycle
  std::map<std::pair<NodeId, std::uint32_t>, FsNodeRef> ids;
  for (FsNodeRef r = 0; r < nodes.size(); ++r) {
    const FsNode& n = nodes[r];
    if (!ids.emplace(std::make_pair(n.physical, n.copy_index), r).second) {
      throw FsError("duplicate (physical, copy) pair");
    }
    for (auto succ : {n.next_primary, n.next_alternate}) {
      if (!succ) continue;
      if (*succ >= nodes.size()) throw FsError("dangling successor");
      if (!topo.find_out_edge(n.physical, nodes[*succ].physical)) {
        throw FsError("FS edge has no matching topology link");
      }
    }
  }
  for (std::size_t i = 0; i + 1 < primary.size(); ++i) {
    if (nodes[primary[i]].next_primary != primary[i + 1]) {
      throw FsError("primary chain broken");
    }
  }
  if (nodes[primary.back()].next_primary || nodes[primary.back()].next_alternate) {
    throw FsError("destination must have no successors");
  }
  {
    std::vector<std::uint8_t> seen(nodes.size(), 0);
    std::vector<FsNodeRef> stack{primary.front()};
    seen[primary.front()] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      FsNodeRef r = stack.back();
      stack.pop_back();
      for (auto succ : {nodes[r].next_primary, nodes[r].next_alternate}) {
        if (succ && !seen[*succ]) {
          seen[*succ] = 1;
          ++count;
          stack.push_back(*succ);
        }
      }
    }
    if (count != nodes.size()) throw FsError("FS node unreachable from the source");
  }
  {
    // Every node must lie on the primary or on some recorded alternate;
    // the codecs lay nodes out from exactly these paths.
    std::vector<std::uint8_t> on_path(nodes.size(), 0);
    for (FsNodeRef r : primary) on_path[r] = 1;
    for (const auto& alt : alternates) {
      for (FsNodeRef r : alt) on_path[r] = 1;
    }
    for (FsNodeRef r = 0; r < nodes.size(); ++r) {
      if (!on_path[r]) throw FsError("FS node not on the primary or any alternate");
    }
  }
  for (std::size_t i = 0; i < alternates.size(); ++i) {
    const auto& path = alternates[i];
    if (path.empty()) {
      if (nodes[primary[i]].next_alternate) throw FsError("alternate slot set but path empty");
      continue;
    }
    if (path.front() != primary[i]) throw FsError("alternate must start at its primary node");
    if (nodes[path.back()].physical != destination_physical()) {
      throw FsError("alternate must end at the destination");
    }
    if (nodes[primary[i]].next_alternate != path[1]) throw FsError("alternate slot mismatch");
    for (std::size_t k = 1; k + 1 < path.size(); ++k) {
      if (nodes[path[k]].next_primary != path[k + 1]) throw FsError("alternate chain broken");
    }
  }
}

FsBuilder::FsBuilder(const Topology& topo, const std::vector<NodeId>& primary_path)
    : topo_(&topo) {
  if (primary_path.size() < 2) throw FsError("primary path must have at least one hop");
  copies_.assign(topo.node_count(), 0);
  for (std::size_t i = 0; i + 1 < primary_path.size(); ++i) {
    if (!topo.find_out_edge(primary_path[i], primary_path[i + 1])) {
      throw FsError("primary path uses a non-existent link");
    }
  }
  for (NodeId u : primary_path) {
    fs_.primary.push_back(new_node(u));
  }
  for (std::size_t i = 0; i + 1 < fs_.primary.size(); ++i) {
    fs_.nodes[fs_.primary[i]].next_primary = fs_.primary[i + 1];
  }
  fs_.alternates.assign(primary_path.size() - 1, {});
}

FsNodeRef FsBuilder::new_node(NodeId physical) {
  topo_->require_node(physical);
  FsNode n;
  n.physical = physical;
  n.copy_index = copies_[physical]++;
  fs_.nodes.push_back(n);
  return static_cast<FsNodeRef>(fs_.nodes.size() - 1);
}

bool FsBuilder::reaches(FsNodeRef from, FsNodeRef to) const {
  if (from == to) return true;
  std::vector<FsNodeRef> stack{from};
  std::vector<std::uint8_t> seen(fs_.nodes.size(), 0);
  seen[from] = 1;
  while (!stack.empty()) {
    FsNodeRef r = stack.back();
    stack.pop_back();
    for (auto succ : {fs_.nodes[r].next_primary, fs_.nodes[r].next_alternate}) {
      if (!succ || seen[*succ]) continue;
      if (*succ == to) return true;
      seen[*succ] = 1;
      stack.push_back(*succ);
    }
  }
  return false;
}

bool FsBuilder::chain_matches(FsNodeRef start, const std::vector<NodeId>& path,
                              std::size_t from) const {
  FsNodeRef cur = start;
  for (std::size_t k = from; k < path.size(); ++k) {
    if (fs_.nodes[cur].physical != path[k]) return false;
    if (k + 1 == path.size()) return !fs_.nodes[cur].next_primary;
    if (!fs_.nodes[cur].next_primary) return false;
    cur = *fs_.nodes[cur].next_primary;
  }
  return true;
}

void FsBuilder::connect(FsNodeRef from, FsNodeRef to, bool as_alternate) {
  auto& slot = as_alternate ? fs_.nodes[from].next_alternate : fs_.nodes[from].next_primary;
  if (slot && *slot != to) throw FsError("successor slot already taken");
  slot = to;
}

void FsBuilder::add_alternate(std::size_t primary_index, const std::vector<NodeId>& path) {
  if (primary_index + 1 >= fs_.primary.size()) throw FsError("bad primary index");
  if (path.size() < 2) throw FsError("alternate path must have at least one hop");
  FsNodeRef anchor = fs_.primary[primary_index];
  if (path.front() != fs_.nodes[anchor].physical) {
    throw FsError("alternate must start at its primary node");
  }
  if (path.back() != fs_.destination_physical()) {
    throw FsError("alternate must end at the destination");
  }
  if (!fs_.alternates[primary_index].empty()) throw FsError("alternate already present");

  std::vector<FsNodeRef> node_path{anchor};
  FsNodeRef cur = anchor;
  for (std::size_t j = 1; j < path.size(); ++j) {
    NodeId w = path[j];
    if (!topo_->find_out_edge(fs_.nodes[cur].physical, w)) {
      throw FsError("alternate path uses a non-existent link");
    }
    bool first_hop = (j == 1);
    // Reuse an existing node only when the rest of this path is exactly its
    // onward chain; anything else must be materialized as a fresh copy so a
    // shared node never carries two conflicting continuations.
    FsNodeRef target = kNoNode;
    if (j + 1 == path.size()) {
      target = fs_.destination_ref();  // shared destination, never a copy
    } else {
      for (FsNodeRef r = 0; r < fs_.nodes.size(); ++r) {
        if (fs_.nodes[r].physical != w) continue;
        if (!chain_matches(r, path, j)) continue;
        if (reaches(r, cur)) continue;  // sharing would close a cycle
        target = r;
        break;
      }
    }
    if (target != kNoNode) {
      connect(cur, target, first_hop);
      // The suffix already exists; record it and stop.
      FsNodeRef walk = target;
      node_path.push_back(walk);
      while (fs_.nodes[walk].next_primary) {
        walk = *fs_.nodes[walk].next_primary;
        node_path.push_back(walk);
      }
      if (fs_.nodes[walk].physical != fs_.destination_physical()) {
        throw FsError("internal: shared chain does not reach the destination");
      }
      fs_.alternates[primary_index] = std::move(node_path);
      return;
    }
    FsNodeRef fresh = new_node(w);
    connect(cur, fresh, first_hop);
    node_path.push_back(fresh);
    cur = fresh;
  }
  fs_.alternates[primary_index] = std::move(node_path);
}

ForwardingSubgraph FsBuilder::take() { return std::move(fs_); }

namespace {

Removed removal_for_hop(const Topology& topo, const FailureModel& model,
                        const std::vector<NodeId>& primary, std::size_t i) {
  NodeId u = primary[i];
  NodeId v = primary[i + 1];
  switch (model.kind) {
    case FailureModel::Kind::SingleLink:
      return Removed::link(u, v);
    case FailureModel::Kind::SingleNode:
      // The destination itself cannot be avoided; the last hop falls back to
      // link protection.
      if (v == primary.back()) return Removed::link(u, v);
      return Removed::node(v);
    case FailureModel::Kind::Srlg: {
      Removed r;
      for (const auto& group : model.groups) {
        bool contains = false;
        for (const LinkRef& l : group) {
          if (l.src == u && l.dst == v) {
            contains = true;
            break;
          }
        }
        if (contains) {
          for (const LinkRef& l : group) r.links.push_back(l);
        }
      }
      if (r.links.empty()) r.links.push_back({u, v});  // singleton group
      return r;
    }
  }
  (void)topo;
  throw FsError("unknown failure model");
}

}  // namespace

ForwardingSubgraph build_fs(const Topology& topo, NodeId s, NodeId d, const FailureModel& model) {
  topo.require_node(s);
  topo.require_node(d);
  if (s == d) throw FsError("source equals destination");
  if (model.kind == FailureModel::Kind::Srlg) {
    if (model.groups.empty()) throw FsError("srlg model requires groups");
    for (const auto& group : model.groups) {
      for (const LinkRef& l : group) {
        if (!topo.has_node(l.src) || !topo.has_node(l.dst) || !topo.find_out_edge(l.src, l.dst)) {
          throw FsError("srlg group names a non-existent link " + std::to_string(l.src) + "-" +
                        std::to_string(l.dst));
        }
      }
    }
  }
  auto primary = shortest_path(topo, s, d);
  if (!primary) {
    throw FsError("nodes " + std::to_string(s) + " and " + std::to_string(d) +
                  " are not connected");
  }
  FsBuilder builder(topo, primary->nodes);
  for (std::size_t i = 0; i + 1 < primary->nodes.size(); ++i) {
    Removed removal = removal_for_hop(topo, model, primary->nodes, i);
    auto alt = shortest_path(topo, primary->nodes[i], d, removal);
    if (alt) builder.add_alternate(i, alt->nodes);
  }
  ForwardingSubgraph fs = builder.take();
  fs.validate(topo);
  return fs;
}

}  // namespace fsroute
