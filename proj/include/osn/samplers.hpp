#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "osn/crawlsim.hpp"
#include "osn/rng.hpp"

namespace osn {

enum class Method { kBfs, kRw, kMhrw };
const char* to_string(Method m);
Method method_from_string(const std::string& s);

enum class WalkEvent : std::uint8_t {
  kMove,      // arrived at a (new or revisited) node
  kSelf,      // MHRW proposal rejected, stayed put
  kBacktrack  // proposed node was invalid; stayed put, iteration consumed
};
const char* to_string(WalkEvent e);

/// One chain's ordered sample sequence. Every iteration appends exactly one
/// entry, so repetitions (self-transitions, revisits) count toward the
/// budget. Counters: proposals/accepts tally MHRW accept-reject decisions on
/// valid proposals; backtracks tallies cancelled proposals of invalid nodes
/// (RW and MHRW). Invalid nodes never appear among the entries.
struct WalkTrace {
  int chain_id = 0;
  NodeId seed = 0;
  std::vector<NodeId> nodes;
  std::vector<WalkEvent> events;

  std::uint64_t proposals = 0;
  std::uint64_t accepts = 0;
  std::uint64_t backtracks = 0;

  // BFS bookkeeping
  bool exhausted = false;           // frontier emptied before the budget
  std::uint64_t invalid_skipped = 0;  // discovered-but-skipped invalid nodes

  std::size_t length() const { return nodes.size(); }
};

/// The traces of one multi-chain run plus its run metadata.
struct ChainSet {
  Method method = Method::kMhrw;
  std::size_t budget = 0;
  std::uint64_t master_seed = 0;
  bool cache_enabled = true;
  std::vector<WalkTrace> traces;

  std::size_t pooled_size(std::size_t burn_in = 0) const;
  /// All post-burn-in entries of all chains, in (chain, iteration) order.
  std::vector<NodeId> pooled_nodes(std::size_t burn_in = 0) const;
};

/// Classic frontier crawl: earliest discovered, not yet visited node next.
/// Neighbors are enqueued in an order randomized once per node by the
/// chain's RNG stream; invalid neighbors are recorded as discovered-but-
/// skipped and never expanded. Stops at the budget or when the frontier is
/// exhausted.
WalkTrace bfs_crawl(Frontend& fe, NodeId seed, std::size_t budget, Rng rng,
                    int chain_id = 0);

/// Simple random walk: next hop uniform among the current node's neighbors.
/// A drawn invalid neighbor is excluded from that node's proposal set for
/// the rest of the run and the draw is repeated within the same step.
WalkTrace rw_crawl(Frontend& fe, NodeId seed, std::size_t budget, Rng rng,
                   int chain_id = 0);

/// Metropolis-Hastings random walk: propose a uniform neighbor w of u, move
/// with probability min(1, k_u/k_w), otherwise record u again. Acceptance
/// ratios always use full declared degrees as fetched. A proposal to an
/// invalid node is cancelled: the chain stays at u, the iteration is
/// consumed, and the node is excluded from u's proposal set for the rest of
/// the run.
WalkTrace mhrw_crawl(Frontend& fe, NodeId seed, std::size_t budget, Rng rng,
                     int chain_id = 0);

/// Runs |seeds| independent chains of `method`, chain i on RNG stream i of
/// the master seed. Seeds must be distinct and crawlable. Chains share only
/// the frontend's cache and ledger, so results are bit-identical to a
/// sequential run of the same streams.
ChainSet run_parallel_chains(Frontend& fe, Method method,
                             std::span<const NodeId> seeds, std::size_t budget,
                             std::uint64_t master_seed, bool parallel = true);

struct UniResult {
  std::vector<NodeId> nodes;  // accepted, with replacement
  std::uint64_t probes = 0;

  double probes_per_accept() const {
    return nodes.empty() ? 0.0
                         : static_cast<double>(probes) /
                               static_cast<double>(nodes.size());
  }
};

/// Uniform-id rejection sampling: draw uniform ids over [1, id_space], poll
/// for existence, keep crawlable users, discard the rest. Aborts after
/// 10^4 * target probes to bound pathological configurations.
UniResult uni_sample(Frontend& fe, std::size_t target, Rng rng);

/// Uniform sub-sample without replacement from the pooled post-burn-in
/// positions of all chains (decorrelation; egonet selection).
std::vector<NodeId> subsample_trace(const ChainSet& chains, std::size_t burn_in,
                                    std::size_t target, Rng rng);

/// Bit-exact trace dump: one line per iteration,
/// "chain_id<TAB>iteration<TAB>node_token<TAB>event".
void dump_traces(const ChainSet& chains, const SocialGraph& g, std::ostream& out);
ChainSet parse_traces(std::istream& in, const std::string& name,
                      const SocialGraph& g);

}  // namespace osn
