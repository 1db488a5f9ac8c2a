#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "elect/engine.hpp"
#include "elect/protocols/params.hpp"

namespace elect {

/// Leader election on an arbitrary connected network by counted random walks.
///
/// Rounds 1..τ (walk phase): each candidate starts with rho walk units of its
/// own rank. Every round a node keeps only units of the largest rank it has
/// ever seen, merges same-rank arrivals, and forwards each unit to a uniform
/// port (lazy walks keep a unit in place with probability 1/2). Units going
/// through the same port travel as one WALK⟨rank, count⟩ token. `origin`
/// remembers the lowest port that first delivered the current rank.
///
/// Round τ+1: every node holding units sends WIN⟨rank, units⟩ towards origin.
/// Rounds τ+2..2τ+1: WIN counts arriving in a round are summed and passed on
/// to origin, until they reach the candidate that owns the rank.
///
/// Round 2τ+2: a candidate whose tally equals rho is ELECTED.
class WalkElection {
public:
  struct State {
    Status status = Status::undecided;
    bool candidate = false;
    std::optional<std::uint64_t> rank;
    std::uint64_t win_tally = 0;
    /// 0 stands for ⊥; ranks start at 1.
    std::uint64_t winner_so_far = 0;
    /// Unset for a candidate holding its own rank.
    std::optional<Port> origin;
    std::uint64_t resident_count = 0;
    std::vector<std::uint64_t> seen_ranks;

    bool holds_own_rank() const { return candidate && rank && winner_so_far == *rank; }
  };

  explicit WalkElection(ElectionParams params) : params_(params), tau_(params.walk_rounds()) { params_.validate(); }

  const ElectionParams& params() const noexcept { return params_; }
  Round walk_rounds() const noexcept { return tau_; }
  Round total_rounds() const { return 2 * tau_ + 2; }

  State init(const NodeInfo& info, Rng& rng) const {
    if (info.n != params_.n) throw error(errc::precondition, "node told n=" + std::to_string(info.n) + " but params say " + std::to_string(params_.n));
    State s;
    std::bernoulli_distribution coin(params_.candidate_prob);
    s.candidate = coin(rng) && info.degree > 0;
    if (s.candidate) {
      std::uniform_int_distribution<std::uint64_t> draw(1, params_.rank_max);
      s.rank = draw(rng);
      // the node's own rank counts as received before round 1
      s.winner_so_far = *s.rank;
      s.resident_count = params_.rho;
      s.seen_ranks.push_back(*s.rank);
    }
    return s;
  }

  void step(State& s, const NodeInfo& info, Round round, Inbox inbox, Outbox& out, Rng& rng) const {
    if (round <= tau_ + 1) {
      absorb_walks(s, round, inbox);
    } else {
      absorb_wins(s, round, inbox, out);
    }

    if (round <= tau_) {
      forward_walks(s, info, out, rng);
    } else if (round == tau_ + 1) {
      if (s.winner_so_far != 0 && s.resident_count > 0) {
        if (s.holds_own_rank())
          s.win_tally += s.resident_count;
        else
          out.send(*s.origin, Token::win(s.winner_so_far, s.resident_count));
        s.resident_count = 0;
      }
    }

    if (round == total_rounds()) {
      s.status = (s.holds_own_rank() && s.win_tally == params_.rho) ? Status::elected : Status::non_elected;
    }
  }

  static Status status(const State& s) { return s.status; }

private:
  static bool has_seen(const State& s, std::uint64_t rank) {
    return std::find(s.seen_ranks.begin(), s.seen_ranks.end(), rank) != s.seen_ranks.end();
  }

  void absorb_walks(State& s, Round round, Inbox inbox) const {
    std::uint64_t top = 0;
    std::optional<Port> top_port;
    for (const auto& msg : inbox) {
      if (msg.token.type != TokenType::walk)
        throw error(errc::protocol_invariant, "unexpected " + std::string(to_string(msg.token.type)) + " in walk round " + std::to_string(round));
      if (!has_seen(s, msg.token.rank)) s.seen_ranks.push_back(msg.token.rank);
      // inbox is ordered by port, so the first port carrying the maximum wins
      if (msg.token.rank > top) {
        top = msg.token.rank;
        top_port = msg.port;
      }
    }
    if (top > s.winner_so_far) {
      s.winner_so_far = top;
      s.origin = top_port;
      s.resident_count = 0;
    }
    for (const auto& msg : inbox)
      if (msg.token.rank == s.winner_so_far) s.resident_count += msg.token.count;
  }

  void forward_walks(State& s, const NodeInfo& info, Outbox& out, Rng& rng) const {
    if (s.resident_count == 0) return;
    std::uint64_t moving = s.resident_count;
    if (params_.lazy) {
      std::binomial_distribution<std::uint64_t> stay_coin(s.resident_count, 0.5);
      moving = s.resident_count - stay_coin(rng);
    }
    if (moving == 0) return;
    std::uniform_int_distribution<Port> pick(0, static_cast<Port>(info.degree - 1));
    std::vector<Port> hops(moving);
    for (auto& p : hops) p = pick(rng);
    std::sort(hops.begin(), hops.end());
    for (std::size_t i = 0; i < hops.size();) {
      std::size_t j = i;
      while (j < hops.size() && hops[j] == hops[i]) ++j;
      out.send(hops[i], Token::walk(s.winner_so_far, j - i));
      i = j;
    }
    s.resident_count -= moving;
  }

  void absorb_wins(State& s, Round round, Inbox inbox, Outbox& out) const {
    std::uint64_t accumulated = 0;
    for (const auto& msg : inbox) {
      if (msg.token.type != TokenType::win)
        throw error(errc::protocol_invariant, "unexpected " + std::string(to_string(msg.token.type)) + " in notification round " + std::to_string(round));
      if (msg.token.rank == s.winner_so_far) {
        accumulated += msg.token.count;
      } else if (msg.token.rank > s.winner_so_far || !has_seen(s, msg.token.rank)) {
        throw error(errc::protocol_invariant, "WIN for rank " + std::to_string(msg.token.rank) + " never seen by this node");
      }
      // otherwise the rank was beaten here and the notification is dropped
    }
    if (accumulated == 0) return;
    if (s.holds_own_rank()) {
      s.win_tally += accumulated;
    } else if (round <= 2 * tau_ + 1) {
      out.send(*s.origin, Token::win(s.winner_so_far, accumulated));
    } else {
      throw error(errc::protocol_invariant, "WIN still in transit at the decision round");
    }
  }

  ElectionParams params_;
  Round tau_;
};

}  // namespace elect
