#include "osn/samplers.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace osn {

const char* to_string(Method m) {
  switch (m) {
    case Method::kBfs: return "bfs";
    case Method::kRw: return "rw";
    case Method::kMhrw: return "mhrw";
  }
  return "?";
}

Method method_from_string(const std::string& s) {
  if (s == "bfs") return Method::kBfs;
  if (s == "rw") return Method::kRw;
  if (s == "mhrw") return Method::kMhrw;
  throw Error("unknown crawl method '" + s + "'");
}

const char* to_string(WalkEvent e) {
  switch (e) {
    case WalkEvent::kMove: return "move";
    case WalkEvent::kSelf: return "self";
    case WalkEvent::kBacktrack: return "backtrack";
  }
  return "?";
}

namespace {

WalkEvent event_from_string(const std::string& s) {
  if (s == "move") return WalkEvent::kMove;
  if (s == "self") return WalkEvent::kSelf;
  if (s == "backtrack") return WalkEvent::kBacktrack;
  throw Error("unknown walk event '" + s + "'");
}

void check_walk_pre(const Frontend& fe, NodeId seed, std::size_t budget) {
  if (budget < 1) throw Error("walk budget must be >= 1");
  if (!fe.is_crawlable(seed)) {
    throw Error("seed " + std::to_string(seed) + " is not crawlable");
  }
}

/// Per-chain proposal sets: each node's neighbor list with the invalid
/// neighbors discovered so far removed for the rest of the run.
class ProposalSets {
 public:
  std::vector<NodeId>& at(NodeId v, const BasicNodeInfo& info) {
    auto it = sets_.find(v);
    if (it == sets_.end()) {
      std::vector<NodeId> nb;
      nb.reserve(info.friends.size());
      for (const auto& f : info.friends) nb.push_back(f.node);
      it = sets_.emplace(v, std::move(nb)).first;
    }
    return it->second;
  }

  static void exclude(std::vector<NodeId>& set, std::size_t index) {
    set[index] = set.back();
    set.pop_back();
  }

 private:
  std::unordered_map<NodeId, std::vector<NodeId>> sets_;
};

}  // namespace

std::size_t ChainSet::pooled_size(std::size_t burn_in) const {
  std::size_t total = 0;
  for (const auto& t : traces) {
    total += t.length() > burn_in ? t.length() - burn_in : 0;
  }
  return total;
}

std::vector<NodeId> ChainSet::pooled_nodes(std::size_t burn_in) const {
  std::vector<NodeId> pooled;
  pooled.reserve(pooled_size(burn_in));
  for (const auto& t : traces) {
    for (std::size_t i = burn_in; i < t.length(); ++i) pooled.push_back(t.nodes[i]);
  }
  return pooled;
}

WalkTrace bfs_crawl(Frontend& fe, NodeId seed, std::size_t budget, Rng rng,
                    int chain_id) {
  check_walk_pre(fe, seed, budget);
  WalkTrace trace;
  trace.chain_id = chain_id;
  trace.seed = seed;

  std::deque<NodeId> frontier{seed};
  std::unordered_set<NodeId> discovered{seed};
  while (!frontier.empty() && trace.length() < budget) {
    const NodeId v = frontier.front();
    frontier.pop_front();
    auto info = fe.fetch_node(v);
    // only pre-screened valid nodes are enqueued
    if (!info) throw Error("bfs_crawl: enqueued node turned invalid");
    trace.nodes.push_back(v);
    trace.events.push_back(WalkEvent::kMove);

    std::vector<NodeId> fresh;
    for (const auto& f : info->friends) {
      if (!discovered.insert(f.node).second) continue;
      if (!f.privacy.view_friends()) {
        ++trace.invalid_skipped;  // discovered but never expanded
        continue;
      }
      fresh.push_back(f.node);
    }
    rng.shuffle(fresh);
    for (NodeId w : fresh) frontier.push_back(w);
  }
  trace.exhausted = frontier.empty();
  return trace;
}

WalkTrace rw_crawl(Frontend& fe, NodeId seed, std::size_t budget, Rng rng,
                   int chain_id) {
  check_walk_pre(fe, seed, budget);
  WalkTrace trace;
  trace.chain_id = chain_id;
  trace.seed = seed;

  ProposalSets proposals;
  auto info = fe.fetch_node(seed);
  trace.nodes.push_back(seed);
  trace.events.push_back(WalkEvent::kMove);

  NodeId current = seed;
  while (trace.length() < budget) {
    auto& set = proposals.at(current, *info);
    // draw until a valid neighbor comes up; invalid draws are excluded from
    // this node's proposal set for the rest of the run
    std::optional<BasicNodeInfo> next;
    NodeId drawn = 0;
    while (!next) {
      if (set.empty()) {
        throw StallError("rw_crawl: all neighbors of node " +
                             std::to_string(current) + " are invalid at iteration " +
                             std::to_string(trace.length()),
                         trace.length(), current);
      }
      const std::size_t i = rng.index(set.size());
      drawn = set[i];
      next = fe.fetch_node(drawn);
      if (!next) {
        ProposalSets::exclude(set, i);
        ++trace.backtracks;
      }
    }
    current = drawn;
    info = std::move(next);
    trace.nodes.push_back(current);
    trace.events.push_back(WalkEvent::kMove);
  }
  return trace;
}

WalkTrace mhrw_crawl(Frontend& fe, NodeId seed, std::size_t budget, Rng rng,
                     int chain_id) {
  check_walk_pre(fe, seed, budget);
  WalkTrace trace;
  trace.chain_id = chain_id;
  trace.seed = seed;

  ProposalSets proposals;
  auto info = fe.fetch_node(seed);
  trace.nodes.push_back(seed);
  trace.events.push_back(WalkEvent::kMove);

  NodeId current = seed;
  while (trace.length() < budget) {
    auto& set = proposals.at(current, *info);
    if (set.empty()) {
      throw StallError("mhrw_crawl: all neighbors of node " +
                           std::to_string(current) + " are invalid at iteration " +
                           std::to_string(trace.length()),
                       trace.length(), current);
    }
    const std::size_t i = rng.index(set.size());
    const NodeId proposed = set[i];
    auto proposed_info = fe.fetch_node(proposed);
    if (!proposed_info) {
      // cancelled as if never selected; the iteration is still consumed
      ProposalSets::exclude(set, i);
      ++trace.backtracks;
      trace.nodes.push_back(current);
      trace.events.push_back(WalkEvent::kBacktrack);
      continue;
    }
    ++trace.proposals;
    // acceptance uses full declared degrees, not exclusion-reduced ones; a
    // move toward equal or smaller degree needs no draw (probability one), so
    // on regular graphs MHRW consumes the same stream as RW
    const double ratio = static_cast<double>(info->degree) /
                         static_cast<double>(proposed_info->degree);
    if (ratio >= 1.0 || rng.real() <= ratio) {
      ++trace.accepts;
      current = proposed;
      info = std::move(proposed_info);
      trace.nodes.push_back(current);
      trace.events.push_back(WalkEvent::kMove);
    } else {
      trace.nodes.push_back(current);
      trace.events.push_back(WalkEvent::kSelf);
    }
  }
  return trace;
}

ChainSet run_parallel_chains(Frontend& fe, Method method,
                             std::span<const NodeId> seeds, std::size_t budget,
                             std::uint64_t master_seed, bool parallel) {
  if (seeds.empty()) throw Error("run_parallel_chains: need at least one seed");
  {
    std::unordered_set<NodeId> distinct(seeds.begin(), seeds.end());
    if (distinct.size() != seeds.size()) {
      throw Error("run_parallel_chains: duplicate seeds");
    }
  }
  for (NodeId s : seeds) {
    if (!fe.is_crawlable(s)) {
      throw Error("run_parallel_chains: seed " + std::to_string(s) +
                  " is not crawlable");
    }
  }

  ChainSet result;
  result.method = method;
  result.budget = budget;
  result.master_seed = master_seed;
  result.cache_enabled = fe.cache_enabled();
  result.traces.resize(seeds.size());

  const Rng master(master_seed);
  std::vector<std::string> errors(seeds.size());
  auto run_one = [&](std::size_t i) {
    try {
      const Rng stream = master.stream(i);
      const int id = static_cast<int>(i);
      switch (method) {
        case Method::kBfs:
          result.traces[i] = bfs_crawl(fe, seeds[i], budget, stream, id);
          break;
        case Method::kRw:
          result.traces[i] = rw_crawl(fe, seeds[i], budget, stream, id);
          break;
        case Method::kMhrw:
          result.traces[i] = mhrw_crawl(fe, seeds[i], budget, stream, id);
          break;
      }
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  };

  if (parallel && seeds.size() > 1) {
    std::vector<std::thread> threads;
    threads.reserve(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      threads.emplace_back(run_one, i);
    }
    for (auto& t : threads) t.join();
  } else {
    for (std::size_t i = 0; i < seeds.size(); ++i) run_one(i);
  }
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!errors[i].empty()) {
      throw Error("chain " + std::to_string(i) + ": " + errors[i]);
    }
  }
  return result;
}

UniResult uni_sample(Frontend& fe, std::size_t target, Rng rng) {
  if (fe.graph().node_count() == 0) throw Error("uni_sample: empty graph");
  if (target == 0) throw Error("uni_sample: target must be >= 1");
  const std::uint64_t cap = 10000ULL * target;
  const std::uint64_t id_space = fe.id_space();

  UniResult result;
  result.nodes.reserve(target);
  while (result.nodes.size() < target) {
    if (result.probes >= cap) {
      throw Error("uni_sample: probe cap exceeded (" + std::to_string(cap) +
                  " probes, " + std::to_string(result.nodes.size()) + " accepts)");
    }
    const auto id = static_cast<std::uint32_t>(1 + rng.index(id_space));
    ++result.probes;
    const ProbeResult probe = fe.probe_id(id);
    if (probe.status == ProbeStatus::kValid) {
      result.nodes.push_back(probe.info->node);
    }
  }
  return result;
}

std::vector<NodeId> subsample_trace(const ChainSet& chains, std::size_t burn_in,
                                    std::size_t target, Rng rng) {
  if (burn_in >= chains.budget) {
    throw Error("subsample_trace: burn_in must be smaller than the budget");
  }
  std::vector<NodeId> pooled = chains.pooled_nodes(burn_in);
  if (target > pooled.size()) {
    throw Error("subsample_trace: target " + std::to_string(target) +
                " exceeds " + std::to_string(pooled.size()) +
                " eligible positions");
  }
  // partial Fisher-Yates: each pooled (chain, index) position used at most once
  std::vector<NodeId> out;
  out.reserve(target);
  for (std::size_t i = 0; i < target; ++i) {
    const std::size_t j = i + rng.index(pooled.size() - i);
    std::swap(pooled[i], pooled[j]);
    out.push_back(pooled[i]);
  }
  return out;
}

void dump_traces(const ChainSet& chains, const SocialGraph& g, std::ostream& out) {
  for (const auto& t : chains.traces) {
    for (std::size_t i = 0; i < t.length(); ++i) {
      out << t.chain_id << '\t' << i << '\t' << g.token(t.nodes[i]) << '\t'
          << to_string(t.events[i]) << '\n';
    }
  }
}

ChainSet parse_traces(std::istream& in, const std::string& name,
                      const SocialGraph& g) {
  std::map<int, WalkTrace> by_chain;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int chain = 0;
    std::size_t iter = 0;
    std::string token, event;
    if (!(ls >> chain >> iter >> token >> event)) {
      throw ParseError(name + ":" + std::to_string(line_no) +
                       ": expected 'chain iter node event'");
    }
    auto node = g.find_token(token);
    if (!node) {
      throw ParseError(name + ":" + std::to_string(line_no) + ": unknown node '" +
                       token + "'");
    }
    auto& t = by_chain[chain];
    t.chain_id = chain;
    if (iter != t.length()) {
      throw ParseError(name + ":" + std::to_string(line_no) +
                       ": iterations out of order");
    }
    t.nodes.push_back(*node);
    t.events.push_back(event_from_string(event));
  }
  ChainSet set;
  for (auto& [id, t] : by_chain) {
    if (!t.nodes.empty()) t.seed = t.nodes.front();
    set.budget = std::max(set.budget, t.length());
    set.traces.push_back(std::move(t));
  }
  return set;
}

}  // namespace osn
