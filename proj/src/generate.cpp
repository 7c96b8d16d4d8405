#include "osn/generate.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace osn {

namespace {

std::vector<std::pair<NodeId, NodeId>> erdos_renyi_edges(const ErdosRenyi& er,
                                                         Rng& rng) {
  if (er.p < 0.0 || er.p > 1.0) throw Error("erdos_renyi: p must lie in [0,1]");
  std::vector<std::pair<NodeId, NodeId>> edges;
  if (er.p >= 1.0) {
    for (NodeId v = 1; v < er.n; ++v)
      for (NodeId w = 0; w < v; ++w) edges.emplace_back(w, v);
    return edges;
  }
  if (er.p <= 0.0) return edges;

  // Batagelj-Brandes skipping: geometric jumps through the lexicographic
  // pair sequence instead of n^2 coin flips.
  const double lp = std::log1p(-er.p);
  std::int64_t v = 1;
  std::int64_t w = -1;
  const auto n = static_cast<std::int64_t>(er.n);
  while (v < n) {
    double u = rng.real();
    while (u <= 0.0) u = rng.real();
    const double lr = std::log(u);
    w += 1 + static_cast<std::int64_t>(std::floor(lr / lp));
    while (w >= v && v < n) {
      w -= v;
      ++v;
    }
    if (v < n) {
      edges.emplace_back(static_cast<NodeId>(w), static_cast<NodeId>(v));
    }
  }
  return edges;
}

std::vector<std::pair<NodeId, NodeId>> barabasi_albert_edges(
    const BarabasiAlbert& ba, Rng& rng) {
  if (ba.m < 1 || ba.m >= ba.n) throw Error("barabasi_albert: need 1 <= m < n");
  std::vector<std::pair<NodeId, NodeId>> edges;
  // Initial core: complete graph on the first m nodes.
  for (NodeId v = 1; v < ba.m; ++v)
    for (NodeId w = 0; w < v; ++w) edges.emplace_back(w, v);

  // repeated_nodes holds each node once per unit of degree, so a uniform
  // draw from it is a preferential-attachment draw.
  std::vector<NodeId> repeated_nodes;
  repeated_nodes.reserve(2 * ba.m * ba.n);
  for (NodeId v = 0; v < ba.m; ++v)
    for (std::size_t i = 0; i + 1 < ba.m; ++i) repeated_nodes.push_back(v);

  std::unordered_set<NodeId> targets;
  for (NodeId v = static_cast<NodeId>(ba.m); v < ba.n; ++v) {
    targets.clear();
    if (repeated_nodes.empty()) {
      // m = 1: the degenerate core K_1 has no degree mass yet; attach the
      // first edge uniformly over existing nodes.
      targets.insert(static_cast<NodeId>(rng.index(v)));
    } else {
      while (targets.size() < ba.m) {
        targets.insert(repeated_nodes[rng.index(repeated_nodes.size())]);
      }
    }
    for (NodeId t : targets) {
      edges.emplace_back(t, v);
      repeated_nodes.push_back(t);
      repeated_nodes.push_back(v);
    }
  }
  return edges;
}

std::vector<std::pair<NodeId, NodeId>> watts_strogatz_edges(
    const WattsStrogatz& ws, Rng& rng) {
  if (ws.k < 2 || ws.k % 2 != 0 || ws.k >= ws.n) {
    throw Error("watts_strogatz: need even k with 2 <= k < n");
  }
  if (ws.beta < 0.0 || ws.beta > 1.0) {
    throw Error("watts_strogatz: beta must lie in [0,1]");
  }
  const std::size_t n = ws.n;
  std::vector<std::unordered_set<NodeId>> adj(n);
  auto connect = [&](NodeId a, NodeId b) {
    adj[a].insert(b);
    adj[b].insert(a);
  };
  for (NodeId v = 0; v < n; ++v) {
    for (std::size_t j = 1; j <= ws.k / 2; ++j) {
      connect(v, static_cast<NodeId>((v + j) % n));
    }
  }
  if (ws.beta > 0.0) {
    for (NodeId v = 0; v < n; ++v) {
      for (std::size_t j = 1; j <= ws.k / 2; ++j) {
        const auto w = static_cast<NodeId>((v + j) % n);
        if (!rng.bernoulli(ws.beta)) continue;
        if (adj[v].size() >= n - 1) continue;  // nothing left to rewire to
        NodeId t;
        do {
          t = static_cast<NodeId>(rng.index(n));
        } while (t == v || adj[v].count(t));
        adj[v].erase(w);
        adj[w].erase(v);
        connect(v, t);
      }
    }
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId w : adj[v]) {
      if (v < w) edges.emplace_back(v, w);
    }
  }
  return edges;
}

}  // namespace

SocialGraph gen_synthetic(const GraphModel& model, std::uint64_t seed,
                          bool extract_largest_component) {
  Rng rng(seed);
  std::size_t n = 0;
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::visit(
      [&](const auto& m) {
        if (m.n < 2) throw Error("generator: need n >= 2");
        n = m.n;
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ErdosRenyi>) {
          edges = erdos_renyi_edges(m, rng);
        } else if constexpr (std::is_same_v<T, BarabasiAlbert>) {
          edges = barabasi_albert_edges(m, rng);
        } else {
          edges = watts_strogatz_edges(m, rng);
        }
      },
      model);
  SocialGraph g = SocialGraph::from_edges(n, std::move(edges));
  if (extract_largest_component) g = largest_component(g);
  return g;
}

}  // namespace osn
