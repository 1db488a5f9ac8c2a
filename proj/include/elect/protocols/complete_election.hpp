#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "elect/engine.hpp"
#include "elect/protocols/params.hpp"

namespace elect {

/// Leader election on a complete network in two message rounds.
///
/// Round 1: each node becomes a candidate with probability `candidate_prob`;
/// non-candidates are NON-ELECTED at once but keep acting as referees.
/// A candidate draws a rank from {1..rank_max} and sends it to
/// min(rho, n-1) distinct ports chosen uniformly.
/// Round 2: every node that received ranks notifies the port that delivered
/// the strictly largest one (lowest port on ties).
/// Round 3: a candidate notified by every referee it contacted is ELECTED.
class CompleteElection {
public:
  struct State {
    Status status = Status::undecided;
    bool candidate = false;
    std::optional<std::uint64_t> rank;
    std::uint64_t referees = 0;
    std::uint64_t win_tally = 0;
  };

  explicit CompleteElection(ElectionParams params) : params_(params) { params_.validate(); }

  const ElectionParams& params() const noexcept { return params_; }

  Round total_rounds() const { return 3; }

  State init(const NodeInfo& info, Rng& rng) const {
    if (info.n != params_.n) throw error(errc::precondition, "node told n=" + std::to_string(info.n) + " but params say " + std::to_string(params_.n));
    if (info.degree + 1 != info.n) throw error(errc::precondition, "complete election needs a complete topology (degree n-1)");
    State s;
    std::bernoulli_distribution coin(params_.candidate_prob);
    s.candidate = coin(rng);
    if (s.candidate) {
      std::uniform_int_distribution<std::uint64_t> draw(1, params_.rank_max);
      s.rank = draw(rng);
    } else {
      s.status = Status::non_elected;
    }
    return s;
  }

  void step(State& s, const NodeInfo& info, Round round, Inbox inbox, Outbox& out, Rng& rng) const {
    switch (round) {
      case 1: {
        if (!s.candidate) return;
        const auto picks = std::min<std::uint64_t>(params_.rho, info.degree);
        std::vector<Port> ports(info.degree);
        std::iota(ports.begin(), ports.end(), Port{0});
        // partial Fisher-Yates: the first `picks` entries are a uniform sample
        for (std::size_t i = 0; i < picks; ++i) {
          std::uniform_int_distribution<std::size_t> pick(i, ports.size() - 1);
          std::swap(ports[i], ports[pick(rng)]);
        }
        ports.resize(picks);
        std::sort(ports.begin(), ports.end());
        for (Port p : ports) out.send(p, Token::candidate(*s.rank));
        s.referees = picks;
        return;
      }
      case 2: {
        std::optional<Inbound> best;
        for (const auto& msg : inbox) {
          if (msg.token.type != TokenType::candidate)
            throw error(errc::protocol_invariant, "unexpected " + std::string(to_string(msg.token.type)) + " in round 2");
          if (!best || msg.token.rank > best->token.rank) best = msg;
        }
        if (best) out.send(best->port, Token::notify());
        return;
      }
      case 3: {
        for (const auto& msg : inbox) {
          if (msg.token.type != TokenType::notify)
            throw error(errc::protocol_invariant, "unexpected " + std::string(to_string(msg.token.type)) + " in round 3");
          ++s.win_tally;
        }
        if (s.candidate && s.win_tally > s.referees)
          throw error(errc::protocol_invariant, "candidate notified more often than it has referees");
        s.status = (s.candidate && s.referees > 0 && s.win_tally == s.referees) ? Status::elected : Status::non_elected;
        return;
      }
      default: return;
    }
  }

  static Status status(const State& s) { return s.status; }

private:
  ElectionParams params_;
};

}  // namespace elect
