#include "osn/graph.hpp"

#include <algorithm>
#include <queue>

namespace osn {

std::string PrivacySettings::to_string() const {
  std::string s(4, '0');
  for (int i = 0; i < 4; ++i) {
    if (bits & (1u << (3 - i))) s[i] = '1';
  }
  return s;
}

PrivacySettings PrivacySettings::parse(const std::string& text) {
  if (text.empty() || text.size() > 4) {
    throw ParseError("privacy value '" + text + "' is not a 4-bit binary value");
  }
  std::uint8_t bits = 0;
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw ParseError("privacy value '" + text + "' is not a 4-bit binary value");
    }
    bits = static_cast<std::uint8_t>((bits << 1) | (c == '1' ? 1 : 0));
  }
  return PrivacySettings{bits};
}

SocialGraph SocialGraph::from_edges(std::size_t node_count,
                                    std::vector<std::pair<NodeId, NodeId>> edges) {
  for (auto& [u, v] : edges) {
    if (u == v) {
      throw Error("self-loop on node " + std::to_string(u));
    }
    if (u >= node_count || v >= node_count) {
      throw Error("edge endpoint out of range");
    }
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  SocialGraph g;
  g.offsets_.assign(node_count + 1, 0);
  for (const auto& [u, v] : edges) {
    ++g.offsets_[u + 1];
    ++g.offsets_[v + 1];
  }
  for (std::size_t i = 1; i <= node_count; ++i) g.offsets_[i] += g.offsets_[i - 1];
  g.adjacency_.resize(edges.size() * 2);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [u, v] : edges) {
    g.adjacency_[cursor[u]++] = v;
    g.adjacency_[cursor[v]++] = u;
  }
  for (NodeId v = 0; v < node_count; ++v) {
    std::sort(g.adjacency_.begin() + g.offsets_[v],
              g.adjacency_.begin() + g.offsets_[v + 1]);
  }

  std::vector<NodeAttributes> attrs(node_count);
  for (std::size_t v = 0; v < node_count; ++v) {
    attrs[v].user_id = static_cast<std::uint32_t>(v + 1);
  }
  g.set_attributes(std::move(attrs));
  return g;
}

bool SocialGraph::has_edge(NodeId u, NodeId v) const {
  if (degree(u) > degree(v)) std::swap(u, v);
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

void SocialGraph::set_attributes(std::vector<NodeAttributes> attrs) {
  if (attrs.size() != node_count()) {
    throw Error("attribute vector size does not match node count");
  }
  std::unordered_map<std::uint32_t, NodeId> index;
  index.reserve(attrs.size());
  for (NodeId v = 0; v < attrs.size(); ++v) {
    auto [it, inserted] = index.emplace(attrs[v].user_id, v);
    if (!inserted) {
      throw Error("duplicate user_id " + std::to_string(attrs[v].user_id));
    }
  }
  attrs_ = std::move(attrs);
  user_index_ = std::move(index);
}

std::optional<NodeId> SocialGraph::find_user(std::uint32_t user_id) const {
  auto it = user_index_.find(user_id);
  if (it == user_index_.end()) return std::nullopt;
  return it->second;
}

void SocialGraph::set_id_space(std::uint64_t s) {
  if (s == 0 || s > 0xFFFFFFFFULL) {
    throw Error("id space must lie in [1, 2^32-1]");
  }
  if (s < node_count()) {
    throw Error("id space smaller than node count");
  }
  id_space_ = s;
}

std::string SocialGraph::token(NodeId v) const {
  if (v < tokens_.size()) return tokens_[v];
  return std::to_string(v);
}

void SocialGraph::set_tokens(std::vector<std::string> tokens) {
  if (!tokens.empty() && tokens.size() != node_count()) {
    throw Error("token vector size does not match node count");
  }
  tokens_ = std::move(tokens);
}

std::optional<NodeId> SocialGraph::find_token(const std::string& token) const {
  if (tokens_.empty()) {
    // decimal index form
    NodeId v = 0;
    for (char c : token) {
      if (c < '0' || c > '9') return std::nullopt;
      v = v * 10 + static_cast<NodeId>(c - '0');
    }
    if (token.empty() || v >= node_count()) return std::nullopt;
    return v;
  }
  for (NodeId v = 0; v < tokens_.size(); ++v) {
    if (tokens_[v] == token) return v;
  }
  return std::nullopt;
}

void SocialGraph::validate() const {
  const std::size_t n = node_count();
  for (NodeId v = 0; v < n; ++v) {
    const auto nb = neighbors(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (nb[i] == v) {
        throw Error("self-loop on node " + std::to_string(v));
      }
      if (nb[i] >= n) {
        throw Error("neighbor out of range at node " + std::to_string(v));
      }
      if (i > 0 && nb[i] == nb[i - 1]) {
        throw Error("duplicate edge (" + std::to_string(v) + ", " +
                    std::to_string(nb[i]) + ")");
      }
      if (i > 0 && nb[i] < nb[i - 1]) {
        throw Error("adjacency not sorted at node " + std::to_string(v));
      }
      if (!has_edge(nb[i], v)) {
        throw Error("asymmetric edge (" + std::to_string(v) + ", " +
                    std::to_string(nb[i]) + ")");
      }
    }
  }
  if (attrs_.size() != n) throw Error("missing attributes");
  std::unordered_map<std::uint32_t, NodeId> seen;
  seen.reserve(n);
  for (NodeId v = 0; v < n; ++v) {
    if (!seen.emplace(attrs_[v].user_id, v).second) {
      throw Error("duplicate user_id " + std::to_string(attrs_[v].user_id));
    }
    if (region_count_ > 0 && attrs_[v].region_id > region_count_) {
      throw Error("region_id out of range on node " + std::to_string(v));
    }
  }
}

SocialGraph largest_component(const SocialGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<int> comp(n, -1);
  int comp_count = 0;
  std::vector<std::size_t> comp_size;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < n; ++s) {
    if (comp[s] != -1) continue;
    comp[s] = comp_count;
    std::size_t size = 0;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      ++size;
      for (NodeId w : g.neighbors(v)) {
        if (comp[w] == -1) {
          comp[w] = comp_count;
          stack.push_back(w);
        }
      }
    }
    comp_size.push_back(size);
    ++comp_count;
  }
  if (comp_count <= 1) return g;

  const int best = static_cast<int>(
      std::max_element(comp_size.begin(), comp_size.end()) - comp_size.begin());
  std::vector<NodeId> remap(n, 0);
  std::vector<NodeId> keep;
  for (NodeId v = 0; v < n; ++v) {
    if (comp[v] == best) {
      remap[v] = static_cast<NodeId>(keep.size());
      keep.push_back(v);
    }
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v : keep) {
    for (NodeId w : g.neighbors(v)) {
      if (comp[w] == best && v < w) edges.emplace_back(remap[v], remap[w]);
    }
  }
  SocialGraph out = SocialGraph::from_edges(keep.size(), std::move(edges));
  std::vector<NodeAttributes> attrs(keep.size());
  std::vector<std::string> tokens;
  tokens.reserve(keep.size());
  bool any_token = false;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    attrs[i] = g.attributes(keep[i]);
    tokens.push_back(g.token(keep[i]));
    any_token = true;
  }
  out.set_attributes(std::move(attrs));
  if (any_token) out.set_tokens(std::move(tokens));
  out.set_id_space(g.id_space());
  out.set_region_count(g.region_count());
  return out;
}

}  // namespace osn
