#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "osn/error.hpp"

namespace osn {

/// Dense internal node index. The 32-bit user id is an attribute, not the
/// storage key: the id space is sparse (roughly 1 in 22 occupied in the
/// reference deployment) while adjacency wants O(1) array lookups.
using NodeId = std::uint32_t;

/// Four basic privacy bits of a user with respect to non-friends, stored in
/// the written order: add_friend, photo, view_friends, send_message.
/// The textual form "1101" means view_friends = 0 (friend list hidden).
struct PrivacySettings {
  static constexpr std::uint8_t kAddFriend = 0b1000;
  static constexpr std::uint8_t kPhoto = 0b0100;
  static constexpr std::uint8_t kViewFriends = 0b0010;
  static constexpr std::uint8_t kSendMessage = 0b0001;
  static constexpr std::uint8_t kDefault = 0b1111;  // allow all

  std::uint8_t bits = kDefault;

  bool add_friend() const { return bits & kAddFriend; }
  bool photo() const { return bits & kPhoto; }
  bool view_friends() const { return bits & kViewFriends; }
  bool send_message() const { return bits & kSendMessage; }
  bool is_default() const { return bits == kDefault; }

  /// 4-character binary form, e.g. "1011".
  std::string to_string() const;
  /// Parses a 1..4 character binary string; anything else is a ParseError.
  static PrivacySettings parse(const std::string& text);

  friend bool operator==(PrivacySettings a, PrivacySettings b) {
    return a.bits == b.bits;
  }
};

struct NodeAttributes {
  std::uint32_t user_id = 0;  // unique, nonzero once assigned
  std::uint16_t region_id = 0;  // 0 = no regional network
  PrivacySettings privacy{};

  friend bool operator==(const NodeAttributes& a, const NodeAttributes& b) {
    return a.user_id == b.user_id && a.region_id == b.region_id &&
           a.privacy == b.privacy;
  }
};

/// Undirected social graph with per-node attributes. Immutable after
/// construction; safe for concurrent reads by many walkers.
///
/// Invariants (checked by validate()): symmetric adjacency, no self-loops,
/// no duplicate edges, unique user ids. Isolated nodes are allowed in
/// storage but are not crawlable.
class SocialGraph {
 public:
  SocialGraph() = default;

  /// Builds the graph from an (unordered, possibly duplicated) edge list.
  /// Edges are symmetrized and deduplicated; self-loops are rejected.
  /// Every node gets default attributes: user_id = index + 1, region 0,
  /// privacy 1111.
  static SocialGraph from_edges(std::size_t node_count,
                                std::vector<std::pair<NodeId, NodeId>> edges);

  std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return adjacency_.size() / 2; }

  std::uint32_t degree(NodeId v) const {
    return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]);
  }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  bool has_edge(NodeId u, NodeId v) const;
  bool is_isolated(NodeId v) const { return degree(v) == 0; }

  const NodeAttributes& attributes(NodeId v) const { return attrs_[v]; }
  const std::vector<NodeAttributes>& attributes() const { return attrs_; }

  /// Replaces all attributes. Rebuilds the user-id index; throws Error on
  /// duplicate user ids or size mismatch.
  void set_attributes(std::vector<NodeAttributes> attrs);

  std::optional<NodeId> find_user(std::uint32_t user_id) const;

  /// Size of the user-id space ids were drawn from, [1, id_space]. Defaults
  /// to the full 32-bit space; planting may shrink it (UNI probes draw from
  /// this range).
  std::uint64_t id_space() const { return id_space_; }
  void set_id_space(std::uint64_t s);

  /// Number of regions R; region ids lie in [0, R].
  std::uint16_t region_count() const { return region_count_; }
  void set_region_count(std::uint16_t r) { region_count_ = r; }

  /// Original node token from the input file; generated graphs use the
  /// decimal index.
  std::string token(NodeId v) const;
  void set_tokens(std::vector<std::string> tokens);
  std::optional<NodeId> find_token(const std::string& token) const;

  /// Checks all structural invariants exhaustively; throws Error with a
  /// description of the first violation.
  void validate() const;

 private:
  std::vector<std::size_t> offsets_;  // CSR, size node_count()+1
  std::vector<NodeId> adjacency_;     // sorted within each node's range
  std::vector<NodeAttributes> attrs_;
  std::vector<std::string> tokens_;  // empty => decimal indices
  std::unordered_map<std::uint32_t, NodeId> user_index_;
  std::uint64_t id_space_ = 0xFFFFFFFFULL;
  std::uint16_t region_count_ = 0;
};

/// Relabels the largest connected component to dense ids (ascending original
/// order), carrying attributes and tokens over. Crawls require reachability.
SocialGraph largest_component(const SocialGraph& g);

}  // namespace osn
