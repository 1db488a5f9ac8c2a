#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "elect/engine.hpp"
#include "elect/protocols/walk_election.hpp"

namespace elect {

/// Engine observer checking the walk election's conservation properties.
///
/// The mass of a rank is: units resident at nodes whose current winner is
/// that rank, plus WALK and WIN counts in flight, plus the tally of the
/// candidate owning it. Mass never grows, and for a unique maximal rank it
/// stays exactly rho. At the end, origin pointers of every node holding the
/// maximal rank must lead without cycles to its candidate, whose tally must be
/// rho; with distinct ranks at most one node may be elected.
class WalkAudit {
public:
  WalkAudit(const Topology& topology, const WalkElection& protocol) : topology_(&topology), protocol_(&protocol) {}

  void operator()(Round round, std::span<const WalkElection::State> states, std::span<const Envelope> sent) {
    std::map<std::uint64_t, std::uint64_t> mass;
    for (const auto& s : states) {
      if (s.resident_count > 0) mass[s.winner_so_far] += s.resident_count;
      if (s.candidate && s.win_tally > 0) mass[*s.rank] += s.win_tally;
    }
    for (const auto& e : sent)
      if (e.payload.type == TokenType::walk || e.payload.type == TokenType::win) mass[e.payload.rank] += e.payload.count;

    if (round == 0) {
      std::map<std::uint64_t, int> owners;
      for (const auto& s : states)
        if (s.candidate) ++owners[*s.rank];
      if (!owners.empty()) {
        max_rank_ = owners.rbegin()->first;
        unique_max_ = owners.rbegin()->second == 1;
        distinct_ranks_ = std::all_of(owners.begin(), owners.end(), [](const auto& kv) { return kv.second == 1; });
      }
    } else {
      for (const auto& [rank, amount] : mass) {
        auto prev = previous_.find(rank);
        if (prev == previous_.end()) {
          fail(round, "rank " + std::to_string(rank) + " appeared from nowhere");
        } else if (amount > prev->second) {
          fail(round, "mass of rank " + std::to_string(rank) + " grew from " + std::to_string(prev->second) + " to " + std::to_string(amount));
        }
      }
    }
    if (unique_max_) {
      const auto it = mass.find(max_rank_);
      const std::uint64_t amount = it == mass.end() ? 0 : it->second;
      if (amount != protocol_->params().rho)
        fail(round, "maximal rank holds " + std::to_string(amount) + " units instead of rho=" + std::to_string(protocol_->params().rho));
    }
    // carry forward zero-mass ranks as well so a vanished rank cannot reappear
    for (auto& [rank, amount] : previous_) amount = 0;
    for (const auto& [rank, amount] : mass) previous_[rank] = amount;

    if (round == protocol_->total_rounds()) finish(states);
  }

  bool ok() const noexcept { return violations_.empty(); }
  const std::vector<std::string>& violations() const noexcept { return violations_; }
  bool unique_max_rank() const noexcept { return unique_max_; }

private:
  void fail(Round round, const std::string& what) { violations_.push_back("round " + std::to_string(round) + ": " + what); }

  void finish(std::span<const WalkElection::State> states) {
    const Round final_round = protocol_->total_rounds();
    if (max_rank_ == 0) return;
    for (NodeId u = 0; u < states.size(); ++u) {
      if (states[u].winner_so_far != max_rank_) continue;
      NodeId at = u;
      std::size_t hops = 0;
      while (!states[at].holds_own_rank()) {
        if (!states[at].origin) {
          fail(final_round, "node " + std::to_string(at) + " holds the maximal rank without origin");
          break;
        }
        at = topology_->neighbor(at, *states[at].origin);
        if (states[at].winner_so_far != max_rank_) {
          fail(final_round, "origin chain from node " + std::to_string(u) + " leaves the maximal rank");
          break;
        }
        if (++hops > states.size()) {
          fail(final_round, "origin cycle through node " + std::to_string(u));
          break;
        }
      }
    }
    std::size_t elected = 0;
    for (const auto& s : states) {
      if (s.status == Status::elected) ++elected;
      if (unique_max_ && s.candidate && *s.rank == max_rank_ && s.win_tally != protocol_->params().rho)
        fail(final_round, "maximal-rank candidate tallied " + std::to_string(s.win_tally) + " of " + std::to_string(protocol_->params().rho));
    }
    if (distinct_ranks_ && elected > 1) fail(final_round, std::to_string(elected) + " leaders with distinct ranks");
  }

  const Topology* topology_;
  const WalkElection* protocol_;
  std::map<std::uint64_t, std::uint64_t> previous_;
  std::uint64_t max_rank_ = 0;
  bool unique_max_ = false;
  bool distinct_ranks_ = true;
  std::vector<std::string> violations_;
};

}  // namespace elect
