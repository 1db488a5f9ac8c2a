#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "elect/error.hpp"
#include "elect/rng.hpp"
#include "elect/token.hpp"
#include "elect/topology.hpp"

namespace elect {

using Round = std::uint32_t;

enum class Status : std::uint8_t { undecided, elected, non_elected };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::undecided: return "UNDECIDED";
    case Status::elected: return "ELECTED";
    case Status::non_elected: return "NON-ELECTED";
  }
  return "?";
}

enum class Model : std::uint8_t { congest, local };

struct ModelConfig {
  Model model = Model::congest;
  /// CONGEST budget per edge per round is c * ⌈log₂ n⌉ bits.
  unsigned bit_budget_factor = 8;
  Round max_rounds = 1u << 20;

  void validate() const {
    if (bit_budget_factor < 1) throw error(errc::config, "bit_budget_factor must be >= 1");
    if (max_rounds < 1) throw error(errc::config, "max_rounds must be >= 1");
  }
};

/// What a node knows about itself. There is no identity and no neighbor list.
struct NodeInfo {
  std::size_t n = 0;
  std::size_t degree = 0;
};

struct Inbound {
  Port port = 0;
  Token token;
};

using Inbox = std::span<const Inbound>;

class Outbox {
public:
  struct Item {
    Port port;
    Token token;
  };

  explicit Outbox(std::size_t degree = 0) : degree_(degree) {}

  void send(Port port, const Token& token) {
    if (port >= degree_)
      throw error(errc::protocol_invariant, "send on port " + std::to_string(port + 1) + " of a degree-" + std::to_string(degree_) + " node");
    items_.push_back({port, token});
  }

  std::span<const Item> items() const noexcept { return items_; }
  bool empty() const noexcept { return items_.empty(); }

  void reset(std::size_t degree) {
    degree_ = degree;
    items_.clear();
  }

private:
  std::size_t degree_;
  std::vector<Item> items_;
};

struct Envelope {
  Round round = 0;
  NodeId src = 0;
  Port out_port = 0;
  NodeId dst = 0;
  Port in_port = 0;
  Token payload;
  unsigned bit_size = 0;

  friend bool operator==(const Envelope&, const Envelope&) = default;
};

struct Trace {
  std::size_t n = 0;
  std::vector<Envelope> envelopes;
  Round rounds = 0;
  std::vector<Status> statuses;
  std::vector<NodeId> leaders;

  friend bool operator==(const Trace&, const Trace&) = default;
};

/// A node state machine driven one synchronous round at a time. `init` runs
/// before round 1; `step` sees the messages sent to the node in the previous
/// round, sorted by incoming port. After `total_rounds()` rounds every status
/// must be decided.
template <typename P>
concept Protocol = requires(const P& p, typename P::State& s, const typename P::State& cs, const NodeInfo& info,
                            Round r, Inbox inbox, Outbox& out, Rng& rng) {
  typename P::State;
  { p.total_rounds() } -> std::convertible_to<Round>;
  { p.init(info, rng) } -> std::same_as<typename P::State>;
  p.step(s, info, r, inbox, out, rng);
  { P::status(cs) } -> std::same_as<Status>;
};

struct NoObserver {
  template <typename State>
  void operator()(Round, std::span<const State>, std::span<const Envelope>) const noexcept {}
};

inline unsigned congest_budget(std::size_t n, unsigned c) { return c * ceil_log2(n); }

/// Execute `protocol` on `topology`. Messages sent in round r are delivered
/// at the start of round r + 1. The observer is called after initialization
/// (round 0) and after every round with all node states and that round's
/// envelopes.
template <Protocol P, typename Observer = NoObserver>
Trace run(const Topology& topology, const P& protocol, const ModelConfig& config, std::uint64_t seed,
          Observer&& observer = {}) {
  using State = typename P::State;
  config.validate();
  const std::size_t n = topology.size();
  const Round total = static_cast<Round>(protocol.total_rounds());
  if (total > config.max_rounds)
    throw error(errc::runaway, "protocol schedule of " + std::to_string(total) + " rounds exceeds max_rounds=" +
                                   std::to_string(config.max_rounds));
  const unsigned budget = congest_budget(n, config.bit_budget_factor);
  const bool congest = config.model == Model::congest;

  Trace trace;
  trace.n = n;
  std::vector<State> states;
  states.reserve(n);
  for (NodeId u = 0; u < n; ++u) {
    Rng rng(node_stream_seed(seed, u, 0));
    states.push_back(protocol.init(NodeInfo{n, topology.degree(u)}, rng));
  }
  observer(Round{0}, std::span<const State>(states), std::span<const Envelope>{});

  std::vector<std::size_t> offsets(n + 1);
  std::vector<Inbound> inboxes;
  std::vector<Port> used_ports;
  Outbox outbox;
  std::size_t prev_begin = 0, prev_end = 0;

  for (Round r = 1; r <= total; ++r) {
    // Bucket last round's envelopes by destination, then order each bucket by port.
    std::fill(offsets.begin(), offsets.end(), 0);
    for (std::size_t i = prev_begin; i < prev_end; ++i) ++offsets[trace.envelopes[i].dst + 1];
    for (std::size_t u = 0; u < n; ++u) offsets[u + 1] += offsets[u];
    inboxes.resize(prev_end - prev_begin);
    {
      std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
      for (std::size_t i = prev_begin; i < prev_end; ++i) {
        const auto& e = trace.envelopes[i];
        inboxes[fill[e.dst]++] = Inbound{e.in_port, e.payload};
      }
    }
    for (std::size_t u = 0; u < n; ++u)
      std::stable_sort(inboxes.begin() + static_cast<std::ptrdiff_t>(offsets[u]),
                       inboxes.begin() + static_cast<std::ptrdiff_t>(offsets[u + 1]),
                       [](const Inbound& a, const Inbound& b) { return a.port < b.port; });

    const std::size_t begin = trace.envelopes.size();
    for (NodeId u = 0; u < n; ++u) {
      const NodeInfo info{n, topology.degree(u)};
      Rng rng(node_stream_seed(seed, u, r));
      outbox.reset(info.degree);
      Inbox inbox(inboxes.data() + offsets[u], offsets[u + 1] - offsets[u]);
      protocol.step(states[u], info, r, inbox, outbox, rng);

      if (congest) used_ports.clear();
      for (const auto& item : outbox.items()) {
        Envelope e;
        e.round = r;
        e.src = u;
        e.out_port = item.port;
        e.dst = topology.neighbor(u, item.port);
        e.in_port = topology.return_port(u, item.port);
        e.payload = item.token;
        e.bit_size = bit_size(item.token, n);
        if (congest) {
          if (e.bit_size > budget)
            throw error(errc::model_violation, "round " + std::to_string(r) + ", edge " + std::to_string(u) + "->" +
                                                   std::to_string(e.dst) + ": " + std::to_string(e.bit_size) +
                                                   "-bit payload exceeds the " + std::to_string(budget) + "-bit budget");
          used_ports.push_back(item.port);
        }
        trace.envelopes.push_back(e);
      }
      if (congest && used_ports.size() > 1) {
        std::sort(used_ports.begin(), used_ports.end());
        auto dup = std::adjacent_find(used_ports.begin(), used_ports.end());
        if (dup != used_ports.end())
          throw error(errc::model_violation, "round " + std::to_string(r) + ", edge " + std::to_string(u) + "->" +
                                                 std::to_string(topology.neighbor(u, *dup)) +
                                                 ": two payloads on one edge in one round");
      }
    }
    prev_begin = begin;
    prev_end = trace.envelopes.size();
    observer(r, std::span<const State>(states),
             std::span<const Envelope>(trace.envelopes.data() + begin, prev_end - begin));
  }

  trace.rounds = total;
  trace.statuses.resize(n);
  for (NodeId u = 0; u < n; ++u) {
    trace.statuses[u] = P::status(states[u]);
    if (trace.statuses[u] == Status::undecided)
      throw error(errc::protocol_invariant, "node " + std::to_string(u) + " undecided at termination");
    if (trace.statuses[u] == Status::elected) trace.leaders.push_back(u);
  }
  return trace;
}

inline std::size_t message_count(const Trace& trace) { return trace.envelopes.size(); }
inline Round round_count(const Trace& trace) { return trace.rounds; }

/// Last round in which anything was sent (0 for a silent run).
inline Round message_rounds(const Trace& trace) {
  Round last = 0;
  for (const auto& e : trace.envelopes) last = std::max(last, e.round);
  return last;
}

/// True iff every payload fits c * ⌈log₂ n⌉ bits and no directed edge carries
/// two payloads in one round.
inline bool check_congest(const Trace& trace, std::size_t n, unsigned c) {
  const unsigned budget = congest_budget(n, c);
  std::vector<std::tuple<Round, NodeId, Port>> keys;
  keys.reserve(trace.envelopes.size());
  for (const auto& e : trace.envelopes) {
    if (e.bit_size > budget) return false;
    keys.emplace_back(e.round, e.src, e.out_port);
  }
  std::sort(keys.begin(), keys.end());
  return std::adjacent_find(keys.begin(), keys.end()) == keys.end();
}

// ---------------------------------------------------------------------------
// Trace export
//
//   elect-trace 1
//   n <n>
//   rounds <R>
//   messages <m>
//   <round> <src> <port> <TYPE> <rank> <count>     one line per envelope, port 1-based
//   status <node> <ELECTED|NON-ELECTED>            one line per node

inline void write_trace(std::ostream& os, const Trace& trace) {
  os << "elect-trace 1\n";
  os << "n " << trace.n << "\n";
  os << "rounds " << trace.rounds << "\n";
  os << "messages " << trace.envelopes.size() << "\n";
  for (const auto& e : trace.envelopes)
    os << e.round << ' ' << e.src << ' ' << (e.out_port + 1) << ' ' << to_string(e.payload.type) << ' '
       << e.payload.rank << ' ' << e.payload.count << '\n';
  for (NodeId u = 0; u < trace.statuses.size(); ++u) os << "status " << u << ' ' << to_string(trace.statuses[u]) << '\n';
}

}  // namespace elect
