#include "fsroute/failsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <thread>

namespace fsroute {

std::optional<TimingParams> preset_params(std::string_view name) {
  if (name == "sprint") return TimingParams{150.0, 50.0, 2.0, 1.0};
  if (name == "sprint0") return TimingParams{0.0, 50.0, 2.0, 1.0};
  if (name == "flat") return TimingParams{50.0, 0.0, 0.0, 1.0};
  if (name == "flat0") return TimingParams{0.0, 0.0, 0.0, 1.0};
  return std::nullopt;
}

std::string preset_names() { return "sprint, sprint0, flat, flat0"; }

std::string_view scheme_token(Scheme s) {
  switch (s) {
    case Scheme::FloodedSp: return "flooded-sp";
    case Scheme::FastSp: return "fast-sp";
    case Scheme::E2eSp: return "e2e-sp";
    case Scheme::FastVsr: return "fast-vsr";
    case Scheme::IdealSafeguard: return "ideal-safeguard";
    case Scheme::IdealNcr: return "ideal-ncr";
  }
  return "?";
}

std::optional<Scheme> scheme_from_token(std::string_view token) {
  for (Scheme s : kAllSchemes) {
    if (scheme_token(s) == token) return s;
  }
  return std::nullopt;
}

TripleContext build_triple_context(const Topology& topo, const Triple& triple) {
  TripleContext ctx;
  ctx.triple = triple;
  auto primary = shortest_path(topo, triple.s, triple.d);
  if (!primary) throw FailsimError("triple endpoints are not connected");
  ctx.primary = primary->nodes;

  bool found = false;
  for (std::size_t i = 0; i + 1 < ctx.primary.size(); ++i) {
    if (ctx.primary[i] == triple.l0.src && ctx.primary[i + 1] == triple.l0.dst) {
      ctx.r0_index = i;
      found = true;
      break;
    }
  }
  if (!found) throw FailsimError("l0 is not on the tie-broken primary path");
  if (triple.r0 != triple.l0.src) throw FailsimError("r0 must be the upstream endpoint of l0");

  Removed failed;
  failed.links.push_back({triple.l0.src, triple.l0.dst});
  failed.links.push_back({triple.l0.dst, triple.l0.src});

  const std::size_t m = ctx.r0_index;
  ctx.dist_s.resize(m + 1);
  ctx.dist_s[0] = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    ctx.dist_s[i + 1] = ctx.dist_s[i] + topo.link_latency(ctx.primary[i], ctx.primary[i + 1]);
  }

  ShortestToDest to_d = shortest_to_dest(topo, triple.d, failed);
  ctx.hdist_to_d.resize(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    if (!to_d.ok(ctx.primary[i])) {
      throw FailsimError("node upstream of l0 is disconnected from d after the failure");
    }
    ctx.hdist_to_d[i] = to_d.dist[ctx.primary[i]];
  }

  ShortestFromSource from_r0 = shortest_from_source(topo, triple.r0, Removed::none());
  ctx.dist_r0_to.resize(m + 1);
  ctx.hops_r0_to.resize(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    if (!from_r0.ok(ctx.primary[i])) throw FailsimError("r0 cannot reach an upstream node");
    ctx.dist_r0_to[i] = from_r0.dist[ctx.primary[i]];
    ctx.hops_r0_to[i] = from_r0.hops[ctx.primary[i]];
  }

  ctx.dist_s_r0 = ctx.dist_s[m];
  ctx.hdist_s_d = ctx.hdist_to_d[0];
  ctx.hdist_r0_d = ctx.hdist_to_d[m];
  ctx.dist_r0_s = ctx.dist_r0_to[0];
  ctx.hops_r0_s = ctx.hops_r0_to[0];

  ShortestToDest to_s = shortest_to_dest(topo, triple.s, failed);
  if (!to_s.ok(triple.d)) throw FailsimError("d cannot reach s after the failure");
  ctx.hdist_d_s = to_s.dist[triple.d];
  return ctx;
}

double scheme_t_learn_s(Scheme scheme, const TripleContext& ctx, const TimingParams& p) {
  switch (scheme) {
    case Scheme::FloodedSp:
      return p.t0 + ctx.dist_r0_s + ctx.hops_r0_s * p.relay_delay;
    case Scheme::FastSp:
    case Scheme::FastVsr:
      return std::max(p.t0, ctx.dist_s_r0) + ctx.dist_s_r0;
    case Scheme::E2eSp:
      return std::max(p.t0, ctx.dist_s_r0) + ctx.hdist_r0_d + p.fib_delay + ctx.hdist_d_s;
    case Scheme::IdealSafeguard:
      return p.t0 + ctx.dist_r0_s + ctx.hops_r0_s * p.relay_delay;
    case Scheme::IdealNcr:
      return p.t0 + ctx.dist_r0_s;  // relay_delay pinned to 0
  }
  throw FailsimError("unknown scheme");
}

double scheme_tau_s(Scheme scheme, const TripleContext& ctx, const TimingParams& p) {
  double fib = (scheme == Scheme::IdealNcr) ? 0.0 : p.fib_delay;
  return scheme_t_learn_s(scheme, ctx, p) + fib;
}

namespace {

double sigma(const TripleContext& ctx, std::size_t i) {
  return (ctx.dist_s[i] + ctx.hdist_to_d[i]) / ctx.hdist_s_d;
}

// Flooded/Fast/e2e: only r0 and the source ever redirect a packet.
double sp_stretch(Scheme scheme, const TripleContext& ctx, const TimingParams& p, double t) {
  if (t >= scheme_tau_s(scheme, ctx, p)) return 1.0;         // sent on the new path
  if (t + ctx.dist_s_r0 < p.t0) return 1.0;                   // crosses l0 before the failure
  return sigma(ctx, ctx.r0_index);                            // redirected by r0
}

// Safeguard: every upstream node redirects once its FIB is ready; a packet
// takes the stretch of the first ready node it reaches.
double safeguard_stretch(const TripleContext& ctx, const TimingParams& p, double t) {
  const std::size_t m = ctx.r0_index;
  for (std::size_t i = 0; i <= m; ++i) {
    double first_redirected_send;
    if (i == m) {
      first_redirected_send = std::max(p.t0, ctx.dist_s_r0) - ctx.dist_s_r0;
    } else {
      double t_learn = p.t0 + ctx.dist_r0_to[i] + ctx.hops_r0_to[i] * p.relay_delay;
      first_redirected_send = std::max(0.0, t_learn + p.fib_delay - ctx.dist_s[i]);
    }
    if (t >= first_redirected_send) return sigma(ctx, i);
  }
  return 1.0;  // crossed l0 before the failure
}

// VSR: packets in flight at the failure are dropped and resent when the
// source has its new path; packets generated after the source learns are
// queued until then. Both deliver at tau(s) + post-failure latency, and a
// packet's lifetime runs from its original generation time.
double vsr_stretch(const TripleContext& ctx, const TimingParams& p, double t) {
  double tau = scheme_tau_s(Scheme::FastVsr, ctx, p);
  if (t >= tau) return 1.0;
  if (t + ctx.dist_s_r0 < p.t0) return 1.0;
  return (tau - t + ctx.hdist_s_d) / ctx.hdist_s_d;
}

}  // namespace

double scheme_stretch(Scheme scheme, const TripleContext& ctx, const TimingParams& p,
                      double gen_time) {
  if (gen_time < 0.0) throw FailsimError("negative generation time");
  switch (scheme) {
    case Scheme::FloodedSp:
    case Scheme::FastSp:
    case Scheme::E2eSp:
      return sp_stretch(scheme, ctx, p, gen_time);
    case Scheme::FastVsr:
      return vsr_stretch(ctx, p, gen_time);
    case Scheme::IdealSafeguard:
      return safeguard_stretch(ctx, p, gen_time);
    case Scheme::IdealNcr: {
      TimingParams zeroed = p;
      zeroed.fib_delay = 0.0;
      zeroed.relay_delay = 0.0;
      return safeguard_stretch(ctx, zeroed, gen_time);
    }
  }
  throw FailsimError("unknown scheme");
}

namespace {

// Portable in-place Fisher-Yates; std::shuffle is not specified bit-exactly.
template <typename T>
void shuffle_fy(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

// Walks the tie-broken path s->v and reports whether it crosses a->b.
bool canonical_path_uses(const Topology& topo, const ShortestToDest& sd, NodeId s, NodeId a,
                         NodeId b) {
  if (!sd.ok(s)) return false;
  if (sd.ok(a)) {
    auto next_at_a = canonical_step(topo, sd, a, Removed::none());
    if (!next_at_a || *next_at_a != b) return false;
  } else {
    return false;
  }
  NodeId cur = s;
  while (cur != sd.dest) {
    if (cur == a) return true;
    auto next = canonical_step(topo, sd, cur, Removed::none());
    if (!next) return false;
    cur = *next;
  }
  return false;
}

}  // namespace

std::vector<Triple> sample_triples(const Topology& topo, std::uint64_t seed,
                                   const SampleCounts& counts) {
  std::mt19937_64 rng(seed);
  const std::size_t n = topo.node_count();

  std::vector<LinkRef> links;
  for (auto [u, v, w] : topo.all_links()) links.push_back({u, v});
  shuffle_fy(links, rng);
  if (links.size() > counts.links) links.resize(counts.links);

  // Reverse-Dijkstra results per destination, shared across links/sources.
  std::map<NodeId, ShortestToDest> to_dest;
  auto dest_info = [&](NodeId v) -> const ShortestToDest& {
    auto it = to_dest.find(v);
    if (it == to_dest.end()) {
      it = to_dest.emplace(v, shortest_to_dest(topo, v, Removed::none())).first;
    }
    return it->second;
  };

  std::vector<Triple> triples;
  for (const LinkRef& l0 : links) {
    std::vector<NodeId> candidates(n);
    for (NodeId u = 0; u < n; ++u) candidates[u] = u;
    shuffle_fy(candidates, rng);
    const std::size_t scan_cap = std::min(n, counts.sources * counts.candidate_factor);

    std::size_t qualified = 0;
    for (std::size_t c = 0; c < scan_cap && qualified < counts.sources; ++c) {
      NodeId s = candidates[c];
      if (s == l0.dst) continue;
      // Destinations whose tie-broken path from s crosses l0.
      std::vector<NodeId> dest_pool;
      for (NodeId v = 0; v < n; ++v) {
        if (v == s) continue;
        if (canonical_path_uses(topo, dest_info(v), s, l0.src, l0.dst)) dest_pool.push_back(v);
      }
      if (dest_pool.empty()) continue;
      ++qualified;
      shuffle_fy(dest_pool, rng);
      if (dest_pool.size() > counts.destinations) dest_pool.resize(counts.destinations);
      std::sort(dest_pool.begin(), dest_pool.end());
      for (NodeId d : dest_pool) {
        Removed failed;
        failed.links.push_back({l0.src, l0.dst});
        failed.links.push_back({l0.dst, l0.src});
        ShortestToDest after = shortest_to_dest(topo, d, failed);
        if (!after.ok(s)) continue;  // must stay connected after the failure
        triples.push_back(Triple{l0, s, d, l0.src});
      }
    }
  }
  return triples;
}

namespace {

void parallel_for_impl(std::size_t count, unsigned threads,
                       const std::function<void(std::size_t, std::size_t)>& range_fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, count)));
  if (threads <= 1 || count <= 1) {
    range_fn(0, count);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    std::size_t lo = t * chunk;
    std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([=, &range_fn] { range_fn(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

EvalResult run_eval(const Topology& topo, const std::vector<Triple>& triples,
                    const std::vector<Scheme>& schemes, const TimingParams& params,
                    std::optional<double> horizon, unsigned threads) {
  if (params.gen_interval <= 0.0) throw FailsimError("gen_interval must be positive");
  EvalResult result;

  std::vector<TripleContext> contexts(triples.size());
  parallel_for_impl(triples.size(), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) contexts[i] = build_triple_context(topo, triples[i]);
  });

  double needed = 0.0;
  for (const TripleContext& ctx : contexts) {
    for (Scheme s : schemes) {
      needed = std::max(needed, scheme_tau_s(s, ctx, params) + ctx.hdist_s_d);
    }
  }
  needed += params.gen_interval;
  double used = horizon.value_or(needed);
  if (horizon && *horizon < needed) {
    result.warning = "horizon " + std::to_string(*horizon) +
                     " ms ends before all schemes converge (needs " + std::to_string(needed) +
                     " ms)";
  }

  std::size_t steps = static_cast<std::size_t>(std::floor(used / params.gen_interval)) + 1;
  result.gen_times.resize(steps);
  for (std::size_t k = 0; k < steps; ++k) result.gen_times[k] = k * params.gen_interval;

  constexpr std::size_t kBlock = 512;
  for (Scheme scheme : schemes) {
    StretchSeries series;
    series.scheme = scheme;
    series.n_triples = contexts.size();
    series.mean.assign(steps, 0.0);
    series.max.assign(steps, contexts.empty() ? 0.0 : 1.0);
    std::vector<double> sums(steps, 0.0);
    std::vector<double> block(kBlock * steps);
    for (std::size_t base = 0; base < contexts.size(); base += kBlock) {
      const std::size_t rows = std::min(kBlock, contexts.size() - base);
      parallel_for_impl(rows, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t r = lo; r < hi; ++r) {
          const TripleContext& ctx = contexts[base + r];
          for (std::size_t k = 0; k < steps; ++k) {
            block[r * steps + k] = scheme_stretch(scheme, ctx, params, result.gen_times[k]);
          }
        }
      });
      // Sequential fixed-order reduction keeps results thread-count independent.
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t k = 0; k < steps; ++k) {
          double v = block[r * steps + k];
          sums[k] += v;
          if (v > series.max[k]) series.max[k] = v;
        }
      }
    }
    if (!contexts.empty()) {
      for (std::size_t k = 0; k < steps; ++k) {
        series.mean[k] = sums[k] / static_cast<double>(contexts.size());
      }
    }
    result.series.push_back(std::move(series));
  }
  return result;
}

std::string format_ms(double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

std::string format_stretch(double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9f", value);
  return buf;
}

void write_stretch_csv(std::ostream& os, const EvalResult& result,
                       const std::vector<std::pair<std::string, std::string>>& metadata) {
  for (const auto& [key, value] : metadata) {
    os << "# " << key << ": " << value << "\n";
  }
  os << "scheme,gen_time_ms,mean_stretch,max_stretch,n_triples\n";
  for (const StretchSeries& series : result.series) {
    for (std::size_t k = 0; k < result.gen_times.size(); ++k) {
      os << scheme_token(series.scheme) << ',' << format_ms(result.gen_times[k]) << ','
         << format_stretch(series.mean[k]) << ',' << format_stretch(series.max[k]) << ','
         << series.n_triples << "\n";
    }
  }
}

}  // namespace fsroute
