#include "support/fs_search.hpp"

#include <algorithm>

#include "support/path_enum.hpp"

namespace fsroute::testing {

namespace {

struct SearchState {
  const std::vector<std::vector<EnumPath>>* choices;
  std::size_t best;
  std::size_t budget;
  bool exhausted_budget = false;

  void recurse(const FsBuilder& builder, std::size_t hop) {
    if (budget == 0) {
      exhausted_budget = true;
      return;
    }
    --budget;
    std::size_t current = builder.current().edge_count();
    if (current >= best) return;  // cannot improve
    if (hop == choices->size()) {
      best = current;
      return;
    }
    for (const EnumPath& alt : (*choices)[hop]) {
      FsBuilder branch = builder;  // FS assembly state is cheap to copy here
      branch.add_alternate(hop, alt.nodes);
      recurse(branch, hop + 1);
    }
  }
};

}  // namespace

std::optional<FsSearchResult> min_fs_edges(const Topology& topo, NodeId s, NodeId d,
                                           std::size_t per_hop_path_cap,
                                           std::size_t node_budget) {
  auto primary = shortest_path(topo, s, d);
  if (!primary) return std::nullopt;

  std::vector<std::vector<EnumPath>> choices(primary->nodes.size() - 1);
  for (std::size_t i = 0; i + 1 < primary->nodes.size(); ++i) {
    Removed removed = Removed::link(primary->nodes[i], primary->nodes[i + 1]);
    choices[i] = enum_all_paths(topo, primary->nodes[i], d, removed, per_hop_path_cap);
    if (choices[i].empty()) return std::nullopt;  // no single-failure protection possible
  }

  SearchState state{&choices, static_cast<std::size_t>(-1), node_budget};
  state.recurse(FsBuilder(topo, primary->nodes), 0);
  return FsSearchResult{state.best, !state.exhausted_budget};
}

}  // namespace fsroute::testing
