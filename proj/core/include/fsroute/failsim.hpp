#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fsroute/topology.hpp"

namespace fsroute {

struct FailsimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// t0: failure time. fib_delay: D, the time between a node learning of the
// failure and its new next hops being usable. relay_delay: d_r, per-hop
// control-message processing (applies to flooded advertisements only).
struct TimingParams {
  double t0 = 0.0;
  double fib_delay = 0.0;
  double relay_delay = 0.0;
  double gen_interval = 1.0;
};

std::optional<TimingParams> preset_params(std::string_view name);
std::string preset_names();  // comma-separated, for usage text

enum class Scheme {
  FloodedSp,        // failure advertised by flooding from the failure point
  FastSp,           // direct notification to the source
  E2eSp,            // notification piggybacked to the destination, then back
  FastVsr,          // single-path source routing with drop/resend
  IdealSafeguard,   // network-controlled pre-computed alternates
  IdealNcr,         // Ideal-SafeGuard with zero processing delays
};

inline constexpr std::array<Scheme, 6> kAllSchemes = {
    Scheme::FloodedSp, Scheme::FastSp,        Scheme::E2eSp,
    Scheme::FastVsr,   Scheme::IdealSafeguard, Scheme::IdealNcr,
};

std::string_view scheme_token(Scheme s);
std::optional<Scheme> scheme_from_token(std::string_view token);

// A failed primary link l0 with the pair (s, d) whose tie-broken shortest
// path uses it; r0 is the node just upstream of l0.
struct Triple {
  LinkRef l0;
  NodeId s = kNoNode;
  NodeId d = kNoNode;
  NodeId r0 = kNoNode;
};

// Per-triple distances used by every scheme. Index i runs over the primary
// nodes upstream of the failure, u_0 = s .. u_{r0_index} = r0. Failing a
// link takes down both directions; only the directed edge matters for the
// path geometry.
struct TripleContext {
  Triple triple;
  std::vector<NodeId> primary;  // s..d
  std::size_t r0_index = 0;

  std::vector<double> dist_s;          // dist(s, u_i), primary prefix sums
  std::vector<double> hdist_to_d;      // post-failure dist(u_i, d)
  std::vector<double> dist_r0_to;      // dist(r0, u_i), intact graph
  std::vector<std::uint32_t> hops_r0_to;

  double dist_s_r0 = 0.0;
  double hdist_s_d = 0.0;
  double hdist_r0_d = 0.0;
  double dist_r0_s = 0.0;
  std::uint32_t hops_r0_s = 0;
  double hdist_d_s = 0.0;
};

TripleContext build_triple_context(const Topology& topo, const Triple& triple);

// When the source learns of the failure, per scheme.
double scheme_t_learn_s(Scheme scheme, const TripleContext& ctx, const TimingParams& params);
// When the source starts using the post-failure path.
double scheme_tau_s(Scheme scheme, const TripleContext& ctx, const TimingParams& params);
// Closed-form stretch of the packet generated at gen_time.
double scheme_stretch(Scheme scheme, const TripleContext& ctx, const TimingParams& params,
                      double gen_time);

struct SampleCounts {
  std::size_t links = 100;
  std::size_t sources = 20;        // qualified sources kept per link
  std::size_t destinations = 20;   // sampled per qualified source
  std::size_t candidate_factor = 20;  // candidate sources scanned per kept one
};

// Seeded, portable sampling of (l0, s, d) triples: random links, then per
// link the first qualified sources among shuffled candidates, then random
// destinations whose tie-broken path uses l0 and that stay connected after
// the failure.
std::vector<Triple> sample_triples(const Topology& topo, std::uint64_t seed,
                                   const SampleCounts& counts);

struct StretchSeries {
  Scheme scheme;
  std::vector<double> mean;
  std::vector<double> max;
  std::size_t n_triples = 0;
};

struct EvalResult {
  std::vector<double> gen_times;
  std::vector<StretchSeries> series;
  std::string warning;  // non-empty when a forced horizon cuts convergence
};

// Mean/max stretch per generation time. Horizon defaults to the point past
// which every series is 1. Aggregation order is fixed, so results do not
// depend on the number of worker threads.
EvalResult run_eval(const Topology& topo, const std::vector<Triple>& triples,
                    const std::vector<Scheme>& schemes, const TimingParams& params,
                    std::optional<double> horizon = std::nullopt, unsigned threads = 0);

void write_stretch_csv(std::ostream& os, const EvalResult& result,
                       const std::vector<std::pair<std::string, std::string>>& metadata);

// Fixed-format numeric rendering shared by the CSV writers.
std::string format_ms(double value);
std::string format_stretch(double value);

}  // namespace fsroute
