#pragma once

#include <algorithm>
#include <iterator>
#include <limits>
#include <optional>
#include <vector>

#include "elect/engine.hpp"

namespace elect {

/// Nodes reachable from one initiator in the communication graph, in the
/// order they joined.
struct InfluenceCloud {
  NodeId initiator = 0;
  std::vector<NodeId> members;
  std::vector<Round> join_round;

  /// Members already in the cloud after `round`.
  std::vector<NodeId> members_at(Round round) const {
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < members.size(); ++i)
      if (join_round[i] <= round) out.push_back(members[i]);
    return out;
  }
};

struct InfluenceCloudSet {
  Round rounds = 0;
  std::vector<InfluenceCloud> clouds;
  /// disjoint_by_round[r] tells whether the clouds were pairwise disjoint after round r.
  std::vector<bool> disjoint_by_round;
  /// Clouds pairwise disjoint at the end of the run.
  bool disjoint = true;
};

/// Rebuild the communication graph round by round from a trace. Edge u→v
/// exists in round r iff u sent to v in some round ≤ r. An initiator is a node
/// that sends its first message before any message reached it; the initiator
/// itself joins its cloud in the round of that first send.
inline InfluenceCloudSet influence_clouds(const Trace& trace) {
  InfluenceCloudSet out;
  out.rounds = trace.rounds;
  out.disjoint_by_round.assign(trace.rounds + 1, true);
  const std::size_t n = trace.n;
  constexpr Round never = std::numeric_limits<Round>::max();

  std::vector<Round> first_send(n, never), first_receive(n, never);
  for (const auto& e : trace.envelopes) {
    first_send[e.src] = std::min(first_send[e.src], e.round);
    first_receive[e.dst] = std::min(first_receive[e.dst], e.round);
  }
  // A message sent in round r is received by the end of round r in the
  // communication-graph sense, so an initiator must not have been reached
  // in any round before its first send.
  std::vector<NodeId> initiators;
  for (NodeId u = 0; u < n; ++u)
    if (first_send[u] != never && first_receive[u] >= first_send[u]) initiators.push_back(u);

  std::vector<std::vector<NodeId>> out_edges(n);
  std::vector<std::vector<Round>> joined(initiators.size(), std::vector<Round>(n, never));
  out.clouds.resize(initiators.size());
  for (std::size_t i = 0; i < initiators.size(); ++i) out.clouds[i].initiator = initiators[i];

  auto envelope = trace.envelopes.begin();
  std::vector<NodeId> stack;
  for (Round r = 1; r <= trace.rounds; ++r) {
    std::vector<std::pair<NodeId, NodeId>> fresh;
    for (; envelope != trace.envelopes.end() && envelope->round == r; ++envelope) {
      auto& edges = out_edges[envelope->src];
      if (std::find(edges.begin(), edges.end(), envelope->dst) == edges.end()) {
        edges.push_back(envelope->dst);
        fresh.emplace_back(envelope->src, envelope->dst);
      }
    }
    for (std::size_t i = 0; i < initiators.size(); ++i) {
      auto& reach = joined[i];
      auto& cloud = out.clouds[i];
      const NodeId root = initiators[i];
      if (reach[root] == never && first_send[root] == r) {
        reach[root] = r;
        cloud.members.push_back(root);
        cloud.join_round.push_back(r);
      }
      if (reach[root] == never) continue;
      stack.clear();
      for (auto [a, b] : fresh)
        if (reach[a] != never && reach[b] == never) {
          reach[b] = r;
          cloud.members.push_back(b);
          cloud.join_round.push_back(r);
          stack.push_back(b);
        }
      while (!stack.empty()) {
        NodeId a = stack.back();
        stack.pop_back();
        for (NodeId b : out_edges[a])
          if (reach[b] == never) {
            reach[b] = r;
            cloud.members.push_back(b);
            cloud.join_round.push_back(r);
            stack.push_back(b);
          }
      }
    }
    // pairwise disjointness after round r
    std::vector<int> owner(n, -1);
    bool disjoint = true;
    for (std::size_t i = 0; i < initiators.size() && disjoint; ++i)
      for (NodeId v = 0; v < n; ++v) {
        if (joined[i][v] > r) continue;
        if (owner[v] != -1) {
          disjoint = false;
          break;
        }
        owner[v] = static_cast<int>(i);
      }
    out.disjoint_by_round[r] = disjoint;
  }
  out.disjoint = out.disjoint_by_round.empty() ? true : out.disjoint_by_round.back();
  return out;
}

/// Why two leaders of one run did not see each other.
struct LeaderPair {
  NodeId first = 0;
  NodeId second = 0;
  /// Both announced the same rank in their first message.
  bool shared_rank = false;
  /// No node received a first-round message from both.
  bool disjoint_contacts = false;
  /// Their influence clouds never met.
  bool disjoint_clouds = false;

  /// Holds for every pair of leaders of the complete-network election: a
  /// common referee notifies only the higher of two distinct ranks.
  bool explained() const noexcept { return shared_rank || disjoint_contacts; }
};

/// One entry per pair of elected nodes in `trace`. A leader's rank is read
/// from the payload of its first message.
inline std::vector<LeaderPair> leader_pairs(const Trace& trace) {
  std::vector<LeaderPair> out;
  if (trace.leaders.size() < 2) return out;
  const auto set = influence_clouds(trace);
  auto rank_of = [&](NodeId u) -> std::optional<std::uint64_t> {
    for (const auto& e : trace.envelopes)
      if (e.src == u) return e.payload.rank;
    return std::nullopt;
  };
  auto contacts_of = [&](NodeId u) {
    std::vector<NodeId> c;
    for (const auto& e : trace.envelopes)
      if (e.src == u && e.round == 1) c.push_back(e.dst);
    std::sort(c.begin(), c.end());
    return c;
  };
  auto cloud_of = [&](NodeId u) {
    std::vector<NodeId> members;
    for (const auto& c : set.clouds)
      if (c.initiator == u) members = c.members;
    std::sort(members.begin(), members.end());
    return members;
  };
  auto meet = [](const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
    std::vector<NodeId> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    return !common.empty();
  };
  for (std::size_t i = 0; i < trace.leaders.size(); ++i)
    for (std::size_t j = i + 1; j < trace.leaders.size(); ++j) {
      LeaderPair p{trace.leaders[i], trace.leaders[j]};
      const auto ra = rank_of(p.first), rb = rank_of(p.second);
      p.shared_rank = ra && rb && *ra == *rb;
      p.disjoint_contacts = !meet(contacts_of(p.first), contacts_of(p.second));
      p.disjoint_clouds = !meet(cloud_of(p.first), cloud_of(p.second));
      out.push_back(p);
    }
  return out;
}

}  // namespace elect
