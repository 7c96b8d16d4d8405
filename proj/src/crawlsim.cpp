#include "osn/crawlsim.hpp"

#include <algorithm>

namespace osn {

BasicNodeInfo Frontend::build_info(NodeId v) const {
  const auto& a = graph_.attributes(v);
  BasicNodeInfo info;
  info.node = v;
  info.user_id = a.user_id;
  info.degree = graph_.degree(v);
  info.friends.reserve(info.degree);
  for (NodeId w : graph_.neighbors(v)) {
    const auto& fa = graph_.attributes(w);
    info.friends.push_back(FriendEntry{w, fa.user_id, fa.region_id, fa.privacy});
  }
  return info;
}

void Frontend::charge_fetch(NodeId v) {
  std::lock_guard lock(mutex_);
  ++ledger_.fetch_count;
  if (cache_enabled_ && !fetched_.insert(v).second) {
    ++ledger_.cache_hits;
  } else {
    ledger_.simulated_bytes += CostLedger::kBytesPerFetch;
  }
}

std::optional<BasicNodeInfo> Frontend::fetch_node(NodeId v) {
  if (v >= graph_.node_count()) {
    throw Error("fetch_node: unknown node " + std::to_string(v));
  }
  charge_fetch(v);  // an invalid page is paid for before it turns out closed
  if (!graph_.attributes(v).privacy.view_friends()) return std::nullopt;
  return build_info(v);
}

ProbeResult Frontend::probe_id(std::uint32_t user_id) {
  {
    std::lock_guard lock(mutex_);
    ++ledger_.probe_count;
  }
  const auto v = graph_.find_user(user_id);
  if (!v) return ProbeResult{ProbeStatus::kNonexistent, std::nullopt};
  if (graph_.is_isolated(*v)) return ProbeResult{ProbeStatus::kIsolated, std::nullopt};
  if (!graph_.attributes(*v).privacy.view_friends()) {
    return ProbeResult{ProbeStatus::kHidden, std::nullopt};
  }
  return ProbeResult{ProbeStatus::kValid, build_info(*v)};
}

EgoNet Frontend::collect_egonet(NodeId ego) {
  auto ego_info = fetch_node(ego);
  if (!ego_info) {
    throw Error("collect_egonet: ego " + std::to_string(ego) + " is invalid");
  }

  EgoNet net;
  net.ego = ego;
  net.members.push_back(ego);
  net.member_degree.push_back(ego_info->degree);
  net.member_attrs.push_back(graph_.attributes(ego));

  std::vector<BasicNodeInfo> neighbor_info;
  for (const FriendEntry& f : ego_info->friends) {
    auto info = fetch_node(f.node);  // every neighbor page is fetched
    if (!info) continue;             // hidden friend list: discard neighbor
    net.members.push_back(f.node);
    net.member_degree.push_back(info->degree);
    net.member_attrs.push_back(graph_.attributes(f.node));
    neighbor_info.push_back(std::move(*info));
  }

  std::unordered_set<NodeId> member_set(net.members.begin(), net.members.end());
  for (const auto& info : neighbor_info) {
    net.edges.emplace_back(std::min(ego, info.node), std::max(ego, info.node));
    for (const FriendEntry& f : info.friends) {
      if (f.node != ego && member_set.count(f.node)) {
        net.edges.emplace_back(std::min(info.node, f.node),
                               std::max(info.node, f.node));
      }
    }
  }
  std::sort(net.edges.begin(), net.edges.end());
  net.edges.erase(std::unique(net.edges.begin(), net.edges.end()), net.edges.end());
  return net;
}

bool Frontend::is_crawlable(NodeId v) const {
  return v < graph_.node_count() && graph_.degree(v) > 0 &&
         graph_.attributes(v).privacy.view_friends();
}

CostLedger Frontend::ledger() const {
  std::lock_guard lock(mutex_);
  return ledger_;
}

void Frontend::reset_ledger() {
  std::lock_guard lock(mutex_);
  ledger_ = CostLedger{};
  fetched_.clear();
}

}  // namespace osn
