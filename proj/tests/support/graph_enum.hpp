// Exhaustive enumeration of connected graphs on up to 8 vertices, one
// representative per isomorphism class, plus random connected graphs up to
// 12 vertices. Test-only.
//
// Method: grow by one vertex at a time. Every connected graph on k vertices
// has a non-cut vertex, so attaching a new vertex with every nonempty
// neighborhood to every (k-1)-vertex representative reaches every class;
// duplicates are removed by a canonical form. The canonical form is the
// minimum upper-triangle edge bitstring over all vertex orderings that sort
// a per-vertex invariant (degree, sorted neighbor degrees) — an
// isomorphism-invariant subset of all orderings, so equal forms <=>
// isomorphic. Class counts are asserted against the known sequence
// 1, 2, 6, 21, 112, 853, 11117 in the tests.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <unordered_set>
#include <vector>

#include "osn/graph.hpp"
#include "osn/rng.hpp"

namespace oracle {

struct SmallGraph {
  int n = 0;
  std::array<std::uint16_t, 12> adj{};  // adjacency bitmasks

  bool edge(int i, int j) const { return adj[i] >> j & 1; }
  void add_edge(int i, int j) {
    adj[i] |= static_cast<std::uint16_t>(1u << j);
    adj[j] |= static_cast<std::uint16_t>(1u << i);
  }
  int degree(int i) const { return __builtin_popcount(adj[i]); }
};

inline osn::SocialGraph to_social(const SmallGraph& g) {
  std::vector<std::pair<osn::NodeId, osn::NodeId>> edges;
  for (int i = 0; i < g.n; ++i) {
    for (int j = i + 1; j < g.n; ++j) {
      if (g.edge(i, j)) edges.emplace_back(i, j);
    }
  }
  return osn::SocialGraph::from_edges(static_cast<std::size_t>(g.n),
                                      std::move(edges));
}

inline bool is_connected(const SmallGraph& g) {
  std::uint16_t seen = 1;
  std::uint16_t frontier = 1;
  while (frontier) {
    std::uint16_t next = 0;
    for (int v = 0; v < g.n; ++v) {
      if (frontier >> v & 1) next |= g.adj[v];
    }
    next &= static_cast<std::uint16_t>(~seen);
    seen |= next;
    frontier = next;
  }
  return seen == (1u << g.n) - 1;
}

inline bool is_bipartite(const SmallGraph& g) {
  std::array<int, 12> color{};
  color.fill(-1);
  for (int s = 0; s < g.n; ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    std::vector<int> stack{s};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w = 0; w < g.n; ++w) {
        if (!g.edge(v, w)) continue;
        if (color[w] == -1) {
          color[w] = 1 - color[v];
          stack.push_back(w);
        } else if (color[w] == color[v]) {
          return false;
        }
      }
    }
  }
  return true;
}

namespace detail {

inline std::uint64_t edge_string(const SmallGraph& g, const std::array<int, 12>& order) {
  std::uint64_t bits = 0;
  int pos = 0;
  for (int i = 0; i < g.n; ++i) {
    for (int j = i + 1; j < g.n; ++j, ++pos) {
      if (g.edge(order[i], order[j])) bits |= 1ULL << pos;
    }
  }
  return bits;
}

inline std::uint64_t canonical_form(const SmallGraph& g) {
  // invariant: (degree, sorted neighbor degrees); orderings sort by it
  std::array<std::vector<int>, 12> inv;
  for (int v = 0; v < g.n; ++v) {
    std::vector<int> nd;
    for (int w = 0; w < g.n; ++w) {
      if (g.edge(v, w)) nd.push_back(g.degree(w));
    }
    std::sort(nd.begin(), nd.end());
    nd.insert(nd.begin(), g.degree(v));
    inv[v] = std::move(nd);
  }
  std::map<std::vector<int>, std::vector<int>> classes;
  for (int v = 0; v < g.n; ++v) classes[inv[v]].push_back(v);

  std::vector<std::vector<int>> blocks;
  for (auto& [key, verts] : classes) blocks.push_back(verts);

  std::uint64_t best = ~0ULL;
  std::array<int, 12> order{};
  // product of permutations within each invariant class
  const std::size_t nblocks = blocks.size();
  std::vector<std::vector<int>> perms(nblocks);
  for (std::size_t b = 0; b < nblocks; ++b) perms[b] = blocks[b];

  auto rec = [&](auto&& self, std::size_t b) -> void {
    if (b == nblocks) {
      int pos = 0;
      for (const auto& block : perms) {
        for (int v : block) order[pos++] = v;
      }
      best = std::min(best, edge_string(g, order));
      return;
    }
    std::sort(perms[b].begin(), perms[b].end());
    do {
      self(self, b + 1);
    } while (std::next_permutation(perms[b].begin(), perms[b].end()));
  };
  rec(rec, 0);
  return best;
}

}  // namespace detail

/// All connected graphs on exactly n <= 8 vertices, one per isomorphism class.
inline std::vector<SmallGraph> connected_graphs(int n) {
  std::vector<SmallGraph> level;
  {
    SmallGraph k1;
    k1.n = 1;
    level.push_back(k1);
  }
  for (int k = 2; k <= n; ++k) {
    std::unordered_set<std::uint64_t> seen;
    std::vector<SmallGraph> next;
    for (const SmallGraph& g : level) {
      for (std::uint16_t mask = 1; mask < (1u << (k - 1)); ++mask) {
        SmallGraph h = g;
        h.n = k;
        for (int w = 0; w < k - 1; ++w) {
          if (mask >> w & 1) h.add_edge(k - 1, w);
        }
        if (seen.insert(detail::canonical_form(h)).second) next.push_back(h);
      }
    }
    level = std::move(next);
  }
  return level;
}

/// `count` random connected graphs on n <= 12 vertices (ER retries).
inline std::vector<SmallGraph> random_connected(int n, int count, osn::Rng& rng) {
  std::vector<SmallGraph> out;
  while (static_cast<int>(out.size()) < count) {
    SmallGraph g;
    g.n = n;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng.bernoulli(0.35)) g.add_edge(i, j);
      }
    }
    if (is_connected(g)) out.push_back(g);
  }
  return out;
}

}  // namespace oracle
