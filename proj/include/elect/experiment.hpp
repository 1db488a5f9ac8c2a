#pragma once

#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include "elect/analysis/report.hpp"
#include "elect/engine.hpp"
#include "elect/mixing.hpp"
#include "elect/protocols/complete_election.hpp"
#include "elect/protocols/naive_election.hpp"
#include "elect/protocols/walk_election.hpp"
#include "elect/topology.hpp"

namespace elect {

enum class Family { complete, hypercube, cycle, random_regular };
enum class ProtocolKind { alg1, alg2, naive };

inline std::optional<Family> parse_family(const std::string& s) {
  if (s == "complete") return Family::complete;
  if (s == "hypercube") return Family::hypercube;
  if (s == "cycle") return Family::cycle;
  if (s == "random-regular") return Family::random_regular;
  return std::nullopt;
}

inline std::optional<ProtocolKind> parse_protocol(const std::string& s) {
  if (s == "alg1") return ProtocolKind::alg1;
  if (s == "alg2") return ProtocolKind::alg2;
  if (s == "naive") return ProtocolKind::naive;
  return std::nullopt;
}

inline std::optional<Model> parse_model(const std::string& s) {
  if (s == "congest") return Model::congest;
  if (s == "local") return Model::local;
  return std::nullopt;
}

/// Graph family and its size parameters, as given on the command line.
struct FamilyConfig {
  std::string family = "complete";
  std::size_t n = 0;
  unsigned dim = 0;
  std::size_t degree = 0;
  /// Clears the lazy flag that bipartite families force on.
  bool no_lazy = false;
};

struct ExperimentConfig {
  FamilyConfig graph;
  std::string protocol = "alg1";
  std::string model = "congest";
  unsigned c = 8;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  double tau_multiplier = 1.0;
  std::size_t workers = 1;
};

namespace detail {
[[noreturn]] inline void bad_field(const std::string& field, const std::string& why) {
  throw error(errc::config, "invalid `" + field + "`: " + why);
}
}  // namespace detail

inline void validate(const FamilyConfig& g) {
  const auto family = parse_family(g.family);
  if (!family) detail::bad_field("family", "expected complete|hypercube|cycle|random-regular, got '" + g.family + "'");
  switch (*family) {
    case Family::complete:
    case Family::cycle:
      if (g.n == 0) detail::bad_field("n", "must be positive");
      break;
    case Family::hypercube:
      if (g.dim == 0) detail::bad_field("dim", "must be positive");
      break;
    case Family::random_regular:
      if (g.n == 0) detail::bad_field("n", "must be positive");
      if (g.degree == 0) detail::bad_field("d", "must be positive");
      break;
  }
}

inline void validate(const ExperimentConfig& cfg) {
  validate(cfg.graph);
  const auto protocol = parse_protocol(cfg.protocol);
  if (!protocol) detail::bad_field("protocol", "expected alg1|alg2|naive, got '" + cfg.protocol + "'");
  if (!parse_model(cfg.model)) detail::bad_field("model", "expected congest|local, got '" + cfg.model + "'");
  if (*protocol == ProtocolKind::alg1 && *parse_family(cfg.graph.family) != Family::complete)
    detail::bad_field("protocol", "alg1 runs only on the complete family");
  if (cfg.c < 1) detail::bad_field("c", "must be positive");
  if (cfg.trials < 1) detail::bad_field("trials", "must be positive");
  if (!(cfg.tau_multiplier > 0.0)) detail::bad_field("tau-multiplier", "must be positive");
  if (cfg.workers < 1) detail::bad_field("workers", "must be positive");
}

/// Build the graph and give it a random port numbering derived from `seed`.
inline Topology build_topology(const FamilyConfig& g, std::uint64_t seed) {
  validate(g);
  Topology t;
  switch (*parse_family(g.family)) {
    case Family::complete: t = make_complete(g.n); break;
    case Family::hypercube: t = make_hypercube(g.dim); break;
    case Family::cycle: t = make_cycle(g.n); break;
    case Family::random_regular: t = make_random_regular(g.n, g.degree, seed); break;
  }
  if (g.no_lazy) t = t.with_lazy(false);
  return assign_random_ports(t, seed);
}

struct ExperimentResult {
  Topology topology;
  /// Mixing time handed to the walk election; 0 for the other protocols.
  Round tau = 0;
  ExperimentReport report;
  /// Trace of trial 0, kept for `--dump-trace`.
  Trace first_trace;
};

template <Protocol P>
ExperimentReport run_trials(const Topology& topology, const P& protocol, const ExperimentConfig& cfg, ModelConfig model,
                            Trace& first_trace) {
  EstimateOptions options;
  options.workers = cfg.workers;
  options.on_trial = [&first_trace](std::size_t trial, const Trace& trace) {
    if (trial == 0) first_trace = trace;
  };
  return estimate_success(topology, protocol, model, cfg.trials, cfg.seed, options);
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentResult result;
  result.topology = build_topology(cfg.graph, cfg.seed);
  const auto& topo = result.topology;
  ModelConfig model;
  model.model = *parse_model(cfg.model);
  model.bit_budget_factor = cfg.c;

  auto params = ElectionParams::for_network(topo.size());
  params.tau_multiplier = cfg.tau_multiplier;
  switch (*parse_protocol(cfg.protocol)) {
    case ProtocolKind::alg1:
      result.report = run_trials(topo, CompleteElection(params), cfg, model, result.first_trace);
      break;
    case ProtocolKind::alg2: {
      params.tau = static_cast<Round>(std::max<std::size_t>(1, mixing_time(topo).mixing_time));
      params.lazy = topo.lazy();
      WalkElection protocol(params);
      result.tau = protocol.walk_rounds();
      result.report = run_trials(topo, protocol, cfg, model, result.first_trace);
      break;
    }
    case ProtocolKind::naive:
      result.report = run_trials(topo, NaiveElection{}, cfg, model, result.first_trace);
      break;
  }
  auto& labels = result.report.labels;
  labels.emplace_back("family", cfg.graph.family);
  labels.emplace_back("n", std::to_string(topo.size()));
  labels.emplace_back("lazy", topo.lazy() ? "1" : "0");
  labels.emplace_back("protocol", cfg.protocol);
  labels.emplace_back("model", cfg.model);
  labels.emplace_back("c", std::to_string(cfg.c));
  labels.emplace_back("seed", std::to_string(cfg.seed));
  labels.emplace_back("tau", std::to_string(result.tau));
  labels.emplace_back("rho", std::to_string(params.rho));
  return result;
}

struct MixReport {
  std::size_t n = 0;
  bool lazy = false;
  std::size_t tau = 0;
  bool verified_at_tau = false;
  /// Verification at τ - 1; only meaningful when τ >= 1.
  bool verified_below = false;
};

inline MixReport run_mix(const FamilyConfig& g, std::uint64_t seed) {
  const Topology t = build_topology(g, seed);
  MixReport r;
  r.n = t.size();
  r.lazy = t.lazy();
  r.tau = mixing_time(t).mixing_time;
  r.verified_at_tau = verify_mixing(t, r.tau);
  r.verified_below = r.tau >= 1 && verify_mixing(t, r.tau - 1);
  return r;
}

inline void write_mix(std::ostream& os, const MixReport& r) {
  os << "n = " << r.n << '\n';
  os << "lazy = " << (r.lazy ? 1 : 0) << '\n';
  os << "tau = " << r.tau << '\n';
  os << "verify_tau = " << (r.verified_at_tau ? "pass" : "fail") << '\n';
  if (r.tau >= 1) os << "verify_tau_minus_1 = " << (r.verified_below ? "pass" : "fail") << '\n';
}

/// Process exit code for a library error.
inline int exit_code(errc code) {
  switch (code) {
    case errc::config:
    case errc::invalid_size:
    case errc::precondition:
    case errc::no_convergence:
    case errc::parse: return 2;
    case errc::model_violation: return 3;
    case errc::protocol_invariant: return 4;
    default: return 1;
  }
}

}  // namespace elect
