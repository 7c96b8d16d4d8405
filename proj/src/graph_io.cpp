#include "osn/graph_io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace osn {

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // LF endings everywhere
  if (!out) throw Error("cannot open " + path + " for writing");
  return out;
}

bool skip_line(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

SocialGraph load_edge_list(const std::string& path) {
  auto in = open_input(path);
  return load_edge_list(in, path);
}

SocialGraph load_edge_list(std::istream& in, const std::string& name) {
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> tokens;
  std::vector<std::pair<NodeId, NodeId>> edges;
  auto intern = [&](const std::string& tok) {
    auto [it, inserted] = ids.emplace(tok, static_cast<NodeId>(tokens.size()));
    if (inserted) tokens.push_back(tok);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a >> b) || (ls >> extra)) {
      throw ParseError(name + ":" + std::to_string(line_no) +
                       ": expected two node tokens");
    }
    if (a == b) {
      throw ParseError(name + ":" + std::to_string(line_no) + ": self-loop on '" +
                       a + "'");
    }
    const NodeId u = intern(a);  // sequenced: first-appearance order
    const NodeId v = intern(b);
    edges.emplace_back(u, v);
  }

  SocialGraph g = SocialGraph::from_edges(tokens.size(), std::move(edges));
  g.set_tokens(std::move(tokens));
  return g;
}

void save_edge_list(const SocialGraph& g, const std::string& path) {
  auto out = open_output(path);
  save_edge_list(g, out);
}

void save_edge_list(const SocialGraph& g, std::ostream& out) {
  for (NodeId v = 0; v < g.node_count(); ++v) {
    for (NodeId w : g.neighbors(v)) {
      if (v < w) out << g.token(v) << ' ' << g.token(w) << '\n';
    }
  }
}

void load_attributes(const std::string& path, SocialGraph& g) {
  auto in = open_input(path);
  load_attributes(in, path, g);
}

void load_attributes(std::istream& in, const std::string& name, SocialGraph& g) {
  std::vector<NodeAttributes> attrs(g.node_count());
  std::vector<bool> assigned(g.node_count(), false);
  std::unordered_set<std::uint32_t> used_ids;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    std::istringstream ls(line);
    std::string tok, privacy;
    std::uint64_t user_id = 0;
    std::uint32_t region = 0;
    std::string extra;
    if (!(ls >> tok >> user_id >> region >> privacy) || (ls >> extra)) {
      throw ParseError(name + ":" + std::to_string(line_no) +
                       ": expected 'token user_id region privacy'");
    }
    auto node = g.find_token(tok);
    if (!node) {
      throw ParseError(name + ":" + std::to_string(line_no) + ": unknown node '" +
                       tok + "'");
    }
    if (assigned[*node]) {
      throw ParseError(name + ":" + std::to_string(line_no) +
                       ": duplicate record for '" + tok + "'");
    }
    if (user_id == 0 || user_id > 0xFFFFFFFFULL) {
      throw ParseError(name + ":" + std::to_string(line_no) +
                       ": user_id must lie in [1, 2^32-1]");
    }
    if (!used_ids.insert(static_cast<std::uint32_t>(user_id)).second) {
      throw ParseError(name + ":" + std::to_string(line_no) +
                       ": duplicate user_id " + std::to_string(user_id));
    }
    if (region > 0xFFFF) {
      throw ParseError(name + ":" + std::to_string(line_no) +
                       ": region_id out of range");
    }
    PrivacySettings q;
    try {
      q = PrivacySettings::parse(privacy);
    } catch (const ParseError& e) {
      throw ParseError(name + ":" + std::to_string(line_no) + ": " + e.what());
    }
    attrs[*node] = NodeAttributes{static_cast<std::uint32_t>(user_id),
                                  static_cast<std::uint16_t>(region), q};
    assigned[*node] = true;
  }

  // Defaults for nodes absent from the file: the smallest unused ids, in
  // node order, so the assignment is deterministic.
  std::uint32_t candidate = 1;
  std::uint16_t max_region = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!assigned[v]) {
      while (used_ids.count(candidate)) ++candidate;
      attrs[v] = NodeAttributes{candidate, 0, PrivacySettings{}};
      used_ids.insert(candidate);
    }
    max_region = std::max(max_region, attrs[v].region_id);
  }
  g.set_attributes(std::move(attrs));
  g.set_region_count(max_region);
}

void save_attributes(const SocialGraph& g, const std::string& path) {
  auto out = open_output(path);
  save_attributes(g, out);
}

void save_attributes(const SocialGraph& g, std::ostream& out) {
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto& a = g.attributes(v);
    out << g.token(v) << ' ' << a.user_id << ' ' << a.region_id << ' '
        << a.privacy.to_string() << '\n';
  }
}

}  // namespace osn
