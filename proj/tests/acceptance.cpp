// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Seeds are fixed, so every number printed here is reproducible.

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "elect/analysis/collision.hpp"
#include "elect/analysis/influence.hpp"
#include "elect/analysis/report.hpp"
#include "elect/mixing.hpp"
#include "elect/protocols/complete_election.hpp"
#include "elect/protocols/naive_election.hpp"
#include "elect/protocols/walk_audit.hpp"
#include "elect/protocols/walk_election.hpp"

using namespace elect;

namespace {

constexpr std::uint64_t kSeed = 20240601;

int failures = 0;

void verdict(int id, bool pass, const std::string& title, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << "  [" << id << "] " << title << ": " << detail << std::endl;
  if (!pass) ++failures;
}

double log2n(std::size_t n) { return std::log2(static_cast<double>(n)); }

/// √n · (log₂ n)^{3/2}
double message_scale(std::size_t n) { return std::sqrt(static_cast<double>(n)) * std::pow(log2n(n), 1.5); }

std::string fmt(double x, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << std::fixed << x;
  return os.str();
}

/// Traces of alg1/alg2 runs that broke the CONGEST check, gathered for [11].
struct CongestTally {
  std::atomic<std::size_t> checked{0};
  std::atomic<std::size_t> bad{0};

  void add(const Trace& t) {
    ++checked;
    if (!check_congest(t, t.n, 8)) ++bad;
  }
};

CongestTally congest;

struct CompleteRun {
  ExperimentReport report;
  bool rounds_exact = true;
};

CompleteRun run_complete(std::size_t n, std::size_t trials) {
  const auto t = assign_random_ports(make_complete(n), kSeed + n);
  CompleteElection alg(ElectionParams::for_network(n));
  CompleteRun out;
  std::atomic<bool> exact{true};
  EstimateOptions options;
  options.on_trial = [&](std::size_t, const Trace& trace) {
    // a run without candidates is silent; any other run sends in rounds 1 and 2
    if (round_count(trace) != 3 || (message_count(trace) > 0 && message_rounds(trace) != 2)) exact = false;
    congest.add(trace);
  };
  out.report = estimate_success(t, alg, ModelConfig{}, trials, kSeed ^ n, options);
  out.rounds_exact = exact;
  return out;
}

void criterion_1_2_3() {
  // [1] every trial: messages in rounds 1 and 2 only, decision in round 3
  bool c1 = true;
  std::string d1;
  for (std::size_t n : {64u, 256u}) {
    auto r = run_complete(n, 300);
    c1 = c1 && r.rounds_exact;
    d1 += "n=" + std::to_string(n) + " rounds_max=" + std::to_string(r.report.round_max) +
          " message_rounds_max=" + std::to_string(r.report.message_round_max) + "; ";
  }
  auto k1024 = run_complete(1024, 1000);
  c1 = c1 && k1024.rounds_exact;
  d1 += "n=1024 rounds_max=" + std::to_string(k1024.report.round_max) +
        " message_rounds_max=" + std::to_string(k1024.report.message_round_max);
  verdict(1, c1, "complete election uses 2 message rounds + decision on every trial", d1);

  // [2]
  const auto& rep = k1024.report;
  verdict(2, rep.unique_leader_freq >= 0.97, "unique leader on K_1024, 1000 trials, >= 0.97",
          "freq=" + fmt(rep.unique_leader_freq) + " wilson95=[" + fmt(rep.unique_ci.low) + ", " +
              fmt(rep.unique_ci.high) + "] zero=" + fmt(rep.zero_leader_freq) + " multi=" + fmt(rep.multi_leader_freq));

  // [3] p99 bound per size, then the ratio trend across sizes
  std::vector<std::size_t> sizes{256, 1024, 4096};
  std::vector<double> p99_ratio, mean_ratio;
  bool bound_ok = true;
  std::string d3;
  for (std::size_t n : sizes) {
    const ExperimentReport r = n == 1024 ? rep : run_complete(n, 1000).report;
    const double bound = 8 * message_scale(n);
    bound_ok = bound_ok && static_cast<double>(r.msg_p99) <= bound;
    p99_ratio.push_back(static_cast<double>(r.msg_p99) / message_scale(n));
    mean_ratio.push_back(r.msg_mean / message_scale(n));
    d3 += "n=" + std::to_string(n) + " p99=" + std::to_string(r.msg_p99) + " bound=" + fmt(bound, 0) +
          " p99/scale=" + fmt(p99_ratio.back(), 3) + " mean/scale=" + fmt(mean_ratio.back(), 3) + "; ";
  }
  verdict(3, bound_ok, "p99 messages <= 8 sqrt(n) log^1.5 n for n in {256, 1024, 4096}", d3);
  bool non_increasing = true;
  for (std::size_t i = 1; i < sizes.size(); ++i)
    non_increasing = non_increasing && p99_ratio[i] <= p99_ratio[i - 1] && mean_ratio[i] <= mean_ratio[i - 1];
  verdict(3, non_increasing, "message ratio to sqrt(n) log^1.5 n non-increasing in n",
          "p99 ratios " + fmt(p99_ratio[0], 3) + " -> " + fmt(p99_ratio[1], 3) + " -> " + fmt(p99_ratio[2], 3) +
              ", mean ratios " + fmt(mean_ratio[0], 3) + " -> " + fmt(mean_ratio[1], 3) + " -> " +
              fmt(mean_ratio[2], 3));
}

void criterion_4() {
  bool ok = true;
  std::string d;
  for (std::size_t n : {8u, 64u, 512u}) {
    const auto tau = mixing_time(make_complete(n)).mixing_time;
    ok = ok && tau == 1;
    d += "K_" + std::to_string(n) + " tau=" + std::to_string(tau) + "; ";
  }
  std::vector<std::pair<std::string, Topology>> graphs;
  for (unsigned dim : {4u, 6u, 8u, 10u}) graphs.emplace_back("Q" + std::to_string(dim), make_hypercube(dim));
  for (std::size_t n : {8u, 16u}) graphs.emplace_back("C" + std::to_string(n), make_cycle(n));
  for (const auto& [name, t] : graphs) {
    const auto tau = mixing_time(t).mixing_time;
    const bool at = verify_mixing(t, tau);
    const bool below = tau >= 1 && verify_mixing(t, tau - 1);
    ok = ok && t.lazy() && at && !below;
    d += name + (t.lazy() ? " lazy" : " NOT lazy") + " tau=" + std::to_string(tau) + " verify(tau)=" + (at ? "pass" : "fail") +
         " verify(tau-1)=" + (below ? "pass" : "fail") + "; ";
  }
  verdict(4, ok, "mixing time: K_n -> 1; verify passes at tau, fails at tau-1", d);
}

struct WalkRun {
  std::string name;
  Round tau = 0;
  ExperimentReport report;
  bool schedule_exact = true;
  std::size_t audited = 0;
  std::vector<std::string> violations;
};

WalkRun run_walk(const std::string& name, const Topology& t, std::size_t trials) {
  auto params = ElectionParams::for_network(t.size());
  params.tau = static_cast<Round>(mixing_time(t).mixing_time);
  params.lazy = t.lazy();
  WalkElection alg(params);
  WalkRun out;
  out.name = name;
  out.tau = alg.walk_rounds();
  std::vector<TrialRecord> records;
  for (std::size_t i = 0; i < trials; ++i) {
    const auto seed = trial_seed(kSeed + t.size(), i);
    WalkAudit audit(t, alg);
    const Trace trace = run(t, alg, ModelConfig{}, seed, std::ref(audit));
    ++out.audited;
    for (const auto& v : audit.violations()) out.violations.push_back("trial " + std::to_string(i) + " " + v);
    if (round_count(trace) != 2 * out.tau + 2 || message_rounds(trace) > 2 * out.tau + 1) out.schedule_exact = false;
    congest.add(trace);
    records.push_back(record_trial(i, seed, trace));
  }
  out.report = summarize(std::move(records));
  return out;
}

void criterion_5_6() {
  std::vector<WalkRun> runs;
  runs.push_back(run_walk("lazy Q10", make_hypercube(10), 200));
  runs.push_back(run_walk("random 8-regular n=1024",
                          assign_random_ports(make_random_regular(1024, 8, kSeed), kSeed), 200));
  bool ok = true;
  std::string d;
  for (const auto& r : runs) {
    const double bound = 8.0 * static_cast<double>(r.tau) * message_scale(1024);
    const bool this_ok = r.report.unique_leader_freq >= 0.95 && r.schedule_exact &&
                         static_cast<double>(r.report.msg_p99) <= bound;
    ok = ok && this_ok;
    d += r.name + ": tau=" + std::to_string(r.tau) + " unique=" + fmt(r.report.unique_leader_freq) + " wilson95=[" +
         fmt(r.report.unique_ci.low) + ", " + fmt(r.report.unique_ci.high) + "] rounds_max=" +
         std::to_string(r.report.round_max) + " (2tau+2=" + std::to_string(2 * r.tau + 2) +
         ") last_send_round_max=" + std::to_string(r.report.message_round_max) + " p99=" +
         std::to_string(r.report.msg_p99) + " bound=" + fmt(bound, 0) + "; ";
  }
  verdict(5, ok, "walk election: unique >= 0.95, 2tau+1 message rounds, p99 <= 8 tau sqrt(n) log^1.5 n", d);

  std::size_t audited = 0, violations = 0;
  std::string first;
  for (const auto& r : runs) {
    audited += r.audited;
    violations += r.violations.size();
    if (first.empty() && !r.violations.empty()) first = " first: " + r.name + " " + r.violations.front();
  }
  verdict(6, violations == 0, "conservation, origin acyclicity and WIN completeness on every trial of [5]",
          std::to_string(audited) + " trials audited, " + std::to_string(violations) + " violations" + first);
}

void criterion_7() {
  const std::size_t n = 256;
  const auto rep = estimate_success(make_complete(n), NaiveElection{}, ModelConfig{}, 100000, kSeed);
  const double closed = std::pow(255.0 / 256.0, 255);
  const bool ok = std::abs(rep.unique_leader_freq - closed) <= 0.01 && rep.msg_max == 0;
  verdict(7, ok, "naive baseline n=256, 1e5 trials, within 0.01 of closed form, no messages",
          "freq=" + fmt(rep.unique_leader_freq) + " closed_form=" + fmt(closed, 6) + " msg_max=" + std::to_string(rep.msg_max));
}

void criterion_8() {
  std::size_t cases = 0, mismatches = 0;
  for (unsigned n = 1; n <= 12; ++n)
    for (unsigned s = 1; s <= std::min(4u, n); ++s) {
      std::vector<unsigned> subsets;
      for (unsigned m = 0; m < (1u << n); ++m)
        if (static_cast<unsigned>(std::popcount(m)) == s) subsets.push_back(m);
      BigInt disjoint = 0;
      for (unsigned a : subsets)
        for (unsigned b : subsets)
          if ((a & b) == 0) ++disjoint;
      const Rational brute(disjoint, BigInt(subsets.size()) * BigInt(subsets.size()));
      ++cases;
      if (brute != no_common_referee_exact(n, s)) ++mismatches;
    }
  const auto v = no_common_referee_exact(20, 5);
  const bool ok = mismatches == 0 && v == Rational(3003, 15504);
  std::ostringstream d;
  d << cases << " (n, s) pairs, " << mismatches << " mismatches; (20,5) = " << numerator(v) << "/" << denominator(v)
    << " (3003/15504 reduced)";
  verdict(8, ok, "exact disjoint-referee probability equals subset enumeration", d.str());
}

void criterion_9() {
  const auto u = collision_mc(uniform_distribution(100), 10, 1000000, kSeed);
  const auto s = collision_mc(skewed_distribution(100, 0.5), 10, 1000000, kSeed + 1);
  const double se = std::sqrt(u.std_error * u.std_error + s.std_error * s.std_error);
  const double z = (u.frequency - s.frequency) / se;
  verdict(9, z > 3.0, "uniform bins maximise the no-collision chance (n=100, rho=10, 1e6 trials)",
          "uniform=" + fmt(u.frequency, 5) + " skewed=" + fmt(s.frequency, 5) + " difference=" + fmt(z, 1) + " std errors");
}

void criterion_10() {
  const std::size_t n = 4096;
  const std::size_t trials = 2000;
  const auto limit = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  const auto t = assign_random_ports(make_complete(n), kSeed);

  struct Tally {
    std::size_t kept = 0, disjoint = 0, leaders_unexplained = 0;
  };
  auto tally_trace = [&](Tally& tally, const Trace& trace) {
    if (message_count(trace) >= limit) return;
    ++tally.kept;
    if (influence_clouds(trace).disjoint) ++tally.disjoint;
    for (const auto& p : leader_pairs(trace))
      if (!p.explained()) ++tally.leaders_unexplained;
  };

  Tally naive, sampled;
  for (std::size_t i = 0; i < trials; ++i) tally_trace(naive, run(t, NaiveElection{}, ModelConfig{}, trial_seed(kSeed, i)));

  auto params = ElectionParams::for_network(n);
  params.candidate_prob = 1.0 / static_cast<double>(n);
  params.rho = 4;
  CompleteElection alg(params);
  for (std::size_t i = 0; i < trials; ++i) tally_trace(sampled, run(t, alg, ModelConfig{}, trial_seed(kSeed + 1, i)));

  auto frac = [](const Tally& x) { return x.kept == 0 ? 0.0 : static_cast<double>(x.disjoint) / static_cast<double>(x.kept); };
  const bool ok = naive.kept > 0 && sampled.kept > 0 && frac(naive) >= 0.99 && frac(sampled) >= 0.99 &&
                  sampled.leaders_unexplained == 0;
  verdict(10, ok, "influence clouds disjoint in >= 99% of runs with < sqrt(n) messages at n=4096",
          "naive: " + std::to_string(naive.kept) + " runs kept, disjoint " + fmt(frac(naive)) +
              "; complete election (1 expected candidate, 4 referees): " + std::to_string(sampled.kept) +
              " runs kept, disjoint " + fmt(frac(sampled)) + ", unexplained leader pairs " +
              std::to_string(sampled.leaders_unexplained));
}

void criterion_11() {
  verdict(11, congest.checked > 0 && congest.bad == 0, "CONGEST check with c=8 on every trace of [2], [3], [5]",
          std::to_string(congest.checked.load()) + " traces, " + std::to_string(congest.bad.load()) + " violations");
}

template <typename F>
void timed(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  try {
    f();
  } catch (const std::exception& e) {
    std::cout << "FAIL  error: " << e.what() << std::endl;
    ++failures;
  }
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
  std::cout << "      (" << fmt(dt.count(), 1) << " s)" << std::endl;
}

}  // namespace

int main() {
  timed(criterion_1_2_3);
  timed(criterion_4);
  timed(criterion_5_6);
  timed(criterion_7);
  timed(criterion_8);
  timed(criterion_9);
  timed(criterion_10);
  criterion_11();
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
