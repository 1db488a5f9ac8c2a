#pragma once

#include <random>

#include "elect/engine.hpp"

namespace elect {

/// Every node elects itself with probability 1/n in round 1 and stops.
/// Sends nothing; succeeds with probability (1 - 1/n)^(n-1).
class NaiveElection {
public:
  struct State {
    Status status = Status::undecided;
  };

  Round total_rounds() const { return 1; }

  State init(const NodeInfo&, Rng&) const { return {}; }

  void step(State& s, const NodeInfo& info, Round round, Inbox, Outbox&, Rng& rng) const {
    if (round != 1) return;
    std::bernoulli_distribution coin(1.0 / static_cast<double>(info.n));
    s.status = coin(rng) ? Status::elected : Status::non_elected;
  }

  static Status status(const State& s) { return s.status; }
};

}  // namespace elect
