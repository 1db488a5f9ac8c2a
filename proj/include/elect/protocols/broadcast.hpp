#pragma once

#include <algorithm>
#include <vector>

#include "elect/engine.hpp"
#include "elect/topology.hpp"

namespace elect {

struct BroadcastResult {
  NodeId leader = 0;
  Round rounds = 0;
  std::size_t messages = 0;
  std::vector<bool> informed;

  bool all_informed() const {
    return std::all_of(informed.begin(), informed.end(), [](bool b) { return b; });
  }
};

/// Make the elected node's identity known to everyone after an implicit
/// election. A leader of degree n-1 reaches all nodes in a single round.
/// Otherwise the identity floods: a node first reached in round r forwards
/// in round r+1 on every port it did not hear it from. Each node sends at
/// most once, so at most 2|E| messages are used.
inline BroadcastResult explicit_broadcast(const Trace& trace, const Topology& topology) {
  if (trace.leaders.size() != 1)
    throw error(errc::precondition, "explicit broadcast needs exactly one leader, trace has " + std::to_string(trace.leaders.size()));
  if (trace.n != topology.size()) throw error(errc::precondition, "trace and topology sizes differ");

  BroadcastResult result;
  result.leader = trace.leaders.front();
  result.informed.assign(topology.size(), false);
  result.informed[result.leader] = true;
  const NodeId leader = result.leader;

  if (topology.degree(leader) + 1 == topology.size()) {
    result.messages = topology.degree(leader);
    result.rounds = result.messages > 0 ? 1 : 0;
    for (NodeId v : topology.neighbors(leader)) result.informed[v] = true;
    return result;
  }

  // senders[i] = node, with the ports it heard the identity on this round
  struct Sender {
    NodeId node;
    std::vector<Port> heard_on;
  };
  std::vector<Sender> senders{{leader, {}}};
  Round round = 0;
  while (!senders.empty()) {
    ++round;
    std::vector<std::vector<Port>> heard(topology.size());
    std::vector<NodeId> newly;
    bool sent_any = false;
    for (const auto& s : senders) {
      for (Port p = 0; p < topology.degree(s.node); ++p) {
        if (std::find(s.heard_on.begin(), s.heard_on.end(), p) != s.heard_on.end()) continue;
        const NodeId v = topology.neighbor(s.node, p);
        ++result.messages;
        sent_any = true;
        heard[v].push_back(topology.return_port(s.node, p));
        if (!result.informed[v]) {
          result.informed[v] = true;
          newly.push_back(v);
        }
      }
    }
    if (sent_any) result.rounds = round;
    senders.clear();
    for (NodeId v : newly) senders.push_back({v, std::move(heard[v])});
  }
  return result;
}

}  // namespace elect
