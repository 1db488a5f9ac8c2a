#pragma once

#include <cmath>
#include <cstdint>

#include "elect/engine.hpp"
#include "elect/error.hpp"
#include "elect/token.hpp"

namespace elect {

/// Parameters shared by all nodes of an election. Defaults follow the
/// network size: candidate probability 2 log₂ n / n, ranks from {1..n⁴},
/// quorum 2⌈√(n log₂ n)⌉.
struct ElectionParams {
  std::size_t n = 0;
  double candidate_prob = 0.0;
  std::uint64_t rank_max = 0;
  std::uint64_t rho = 1;
  /// Walk length in rounds; only the general-graph election uses it.
  Round tau = 1;
  double tau_multiplier = 1.0;
  /// Walk units stay put with probability 1/2 each step.
  bool lazy = false;

  static ElectionParams for_network(std::size_t n) {
    if (n < 1) throw error(errc::invalid_size, "network needs at least one node");
    ElectionParams p;
    p.n = n;
    p.candidate_prob = candidate_probability(n);
    p.rank_max = rank_domain_max(n);
    p.rho = quorum_size(n);
    return p;
  }

  /// τ scaled by the multiplier, at least one round.
  Round walk_rounds() const {
    const double scaled = std::round(static_cast<double>(tau) * tau_multiplier);
    return scaled < 1.0 ? Round{1} : static_cast<Round>(scaled);
  }

  void validate() const {
    if (n < 1) throw error(errc::precondition, "params: n must be >= 1");
    if (!(candidate_prob > 0.0 && candidate_prob <= 1.0)) throw error(errc::precondition, "params: candidate_prob must lie in (0, 1]");
    if (rank_max < 1) throw error(errc::precondition, "params: rank_max must be >= 1");
    if (rho < 1) throw error(errc::precondition, "params: rho must be >= 1");
    if (tau < 1) throw error(errc::precondition, "params: tau must be >= 1");
    if (!(tau_multiplier > 0.0)) throw error(errc::precondition, "params: tau_multiplier must be positive");
  }
};

}  // namespace elect
