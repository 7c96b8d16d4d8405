#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <unordered_set>
#include <utility>
#include <vector>

#include "osn/graph.hpp"

namespace osn {

/// One friend-list entry as seen on the subject's page. Network and privacy
/// of a user are only visible indirectly, through entries on a friend's
/// page, so each entry carries them.
struct FriendEntry {
  NodeId node = 0;
  std::uint32_t user_id = 0;
  std::uint16_t region_id = 0;
  PrivacySettings privacy{};
};

/// Everything one simulated page fetch reveals about a node. Returned only
/// when the subject's view_friends bit is set; |friends| always equals the
/// declared degree.
struct BasicNodeInfo {
  NodeId node = 0;
  std::uint32_t user_id = 0;
  std::uint32_t degree = 0;
  std::vector<FriendEntry> friends;
};

/// Per-run cost accounting. fetch_count counts every fetch call; cache_hits
/// the ones served from the shared cache, so
///   simulated_bytes = 220 KiB * (fetch_count - cache_hits)
/// holds exactly after every operation sequence.
struct CostLedger {
  static constexpr std::uint64_t kBytesPerFetch = 220ULL * 1024ULL;

  std::uint64_t fetch_count = 0;
  std::uint64_t probe_count = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t simulated_bytes = 0;
};

enum class ProbeStatus {
  kNonexistent,  // no node carries this user id
  kIsolated,     // exists with degree 0; discarded by UNI
  kHidden,       // exists but view_friends = 0; not crawlable, discarded
  kValid
};

struct ProbeResult {
  ProbeStatus status = ProbeStatus::kNonexistent;
  std::optional<BasicNodeInfo> info;  // set only when status == kValid
};

/// A node (ego), its crawlable neighbors, and all edges among them.
/// Neighbors with hidden friend lists are discarded together with their
/// incident edges. members[0] is the ego; attributes and declared degrees
/// are snapshotted so estimators need no further graph access.
struct EgoNet {
  NodeId ego = 0;
  std::vector<NodeId> members;
  std::vector<std::uint32_t> member_degree;
  std::vector<NodeAttributes> member_attrs;
  std::vector<std::pair<NodeId, NodeId>> edges;  // canonical (min,max), sorted
};

/// Simulated social-network front-end: the only way samplers see the graph.
///
/// Fetches are pure functions of the node, privacy-gated (a hidden friend
/// list is never returned by any path), and charged to an internally
/// synchronized ledger. The fetch cache is shared by all chains using this
/// frontend; it changes cost only, never results. All entry points are safe
/// for concurrent invocation and ledger totals are exact regardless of
/// interleaving.
class Frontend {
 public:
  explicit Frontend(const SocialGraph& g, bool cache_enabled = true)
      : graph_(g), cache_enabled_(cache_enabled) {}

  /// Fetches the "show friends" page of v. Returns the basic node info, or
  /// nullopt when v hides its friend list (the page is still paid for).
  /// Unknown ids are simulator misuse and throw.
  std::optional<BasicNodeInfo> fetch_node(NodeId v);

  /// Existence poll over the user-id space; used by UNI rejection sampling.
  ProbeResult probe_id(std::uint32_t user_id);

  /// Fetches the ego and every neighbor (1 + degree fetches, modulo cache)
  /// and assembles the visible egonet. Throws if the ego itself is invalid.
  EgoNet collect_egonet(NodeId ego);

  /// Seed validation only: true when v can start a crawl (friend list
  /// visible and degree >= 1). Costs nothing; crawl seeds are assumed known.
  bool is_crawlable(NodeId v) const;

  const SocialGraph& graph() const { return graph_; }
  bool cache_enabled() const { return cache_enabled_; }
  std::uint64_t id_space() const { return graph_.id_space(); }

  CostLedger ledger() const;
  void reset_ledger();

 private:
  BasicNodeInfo build_info(NodeId v) const;
  void charge_fetch(NodeId v);

  const SocialGraph& graph_;
  bool cache_enabled_;
  mutable std::mutex mutex_;
  std::unordered_set<NodeId> fetched_;
  CostLedger ledger_;
};

}  // namespace osn
