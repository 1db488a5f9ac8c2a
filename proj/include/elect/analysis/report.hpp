#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "elect/engine.hpp"
#include "elect/rng.hpp"

namespace elect {

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t leaders = 0;
  std::size_t messages = 0;
  Round rounds = 0;
  Round message_rounds = 0;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

inline TrialRecord record_trial(std::size_t trial, std::uint64_t seed, const Trace& trace) {
  return {trial, seed, trace.leaders.size(), message_count(trace), round_count(trace), message_rounds(trace)};
}

struct Interval {
  double low = 0.0;
  double high = 0.0;
  double half_width() const { return 0.5 * (high - low); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Wilson score interval for `successes` out of `trials` at normal quantile z.
inline Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054) {
  if (trials == 0) return {0.0, 1.0};
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double center = (p + z2 / (2.0 * nt)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

/// Nearest-rank quantile of already sorted data.
template <typename T>
T quantile_sorted(std::span<const T> sorted, double q) {
  if (sorted.empty()) return T{};
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

struct ExperimentReport {
  std::vector<std::pair<std::string, std::string>> labels;
  std::size_t trials = 0;
  double unique_leader_freq = 0.0;
  double zero_leader_freq = 0.0;
  double multi_leader_freq = 0.0;
  std::size_t msg_p50 = 0;
  std::size_t msg_p90 = 0;
  std::size_t msg_p99 = 0;
  std::size_t msg_max = 0;
  double msg_mean = 0.0;
  Round round_max = 0;
  Round message_round_max = 0;
  Interval unique_ci;
  /// Wilson half-width of the unique-leader frequency at 95%.
  double ci_95 = 0.0;
  std::vector<TrialRecord> records;

  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

inline ExperimentReport summarize(std::vector<TrialRecord> records) {
  ExperimentReport r;
  r.trials = records.size();
  if (records.empty()) return r;
  std::size_t unique = 0, zero = 0, multi = 0;
  std::vector<std::size_t> messages;
  messages.reserve(records.size());
  double total = 0.0;
  for (const auto& t : records) {
    if (t.leaders == 0) ++zero;
    else if (t.leaders == 1) ++unique;
    else ++multi;
    messages.push_back(t.messages);
    total += static_cast<double>(t.messages);
    r.round_max = std::max(r.round_max, t.rounds);
    r.message_round_max = std::max(r.message_round_max, t.message_rounds);
  }
  const double nt = static_cast<double>(records.size());
  r.unique_leader_freq = static_cast<double>(unique) / nt;
  r.zero_leader_freq = static_cast<double>(zero) / nt;
  r.multi_leader_freq = static_cast<double>(multi) / nt;
  std::sort(messages.begin(), messages.end());
  std::span<const std::size_t> sorted(messages);
  r.msg_p50 = quantile_sorted(sorted, 0.50);
  r.msg_p90 = quantile_sorted(sorted, 0.90);
  r.msg_p99 = quantile_sorted(sorted, 0.99);
  r.msg_max = messages.back();
  r.msg_mean = total / nt;
  r.unique_ci = wilson_interval(unique, records.size());
  r.ci_95 = r.unique_ci.half_width();
  r.records = std::move(records);
  return r;
}

struct EstimateOptions {
  std::size_t workers = 1;
  /// Called once per trial with the finished trace. Runs on worker threads
  /// when workers > 1.
  std::function<void(std::size_t trial, const Trace&)> on_trial;
};

/// Run `trials` independent executions. Trial i uses seed trial_seed(master_seed, i),
/// so the report does not depend on the number of workers.
template <Protocol P>
ExperimentReport estimate_success(const Topology& topology, const P& protocol, const ModelConfig& config,
                                  std::size_t trials, std::uint64_t master_seed, const EstimateOptions& options = {}) {
  if (trials < 1) throw error(errc::precondition, "estimate_success needs trials >= 1");
  std::vector<TrialRecord> records(trials);
  std::vector<std::exception_ptr> failures(trials);

  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < trials; i += stride) {
      const std::uint64_t seed = trial_seed(master_seed, i);
      try {
        Trace trace = run(topology, protocol, config, seed);
        records[i] = record_trial(i, seed, trace);
        if (options.on_trial) options.on_trial(i, trace);
      } catch (const error& e) {
        failures[i] = std::make_exception_ptr(error(e.code(), "trial " + std::to_string(i) + ": " + e.detail()));
        return;
      } catch (...) {
        failures[i] = std::current_exception();
        return;
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, trials);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return summarize(std::move(records));
}

// ---------------------------------------------------------------------------
// Export

/// One experiment as a `key = value` record.
inline void write_report(std::ostream& os, const ExperimentReport& r) {
  const auto old_precision = os.precision(10);
  os << "[experiment]\n";
  for (const auto& [k, v] : r.labels) os << k << " = " << v << '\n';
  os << "trials = " << r.trials << '\n';
  os << "unique_leader_freq = " << r.unique_leader_freq << '\n';
  os << "zero_leader_freq = " << r.zero_leader_freq << '\n';
  os << "multi_leader_freq = " << r.multi_leader_freq << '\n';
  os << "ci_95 = " << r.ci_95 << '\n';
  os << "ci_low = " << r.unique_ci.low << '\n';
  os << "ci_high = " << r.unique_ci.high << '\n';
  os << "msg_p50 = " << r.msg_p50 << '\n';
  os << "msg_p90 = " << r.msg_p90 << '\n';
  os << "msg_p99 = " << r.msg_p99 << '\n';
  os << "msg_max = " << r.msg_max << '\n';
  os << "msg_mean = " << r.msg_mean << '\n';
  os << "round_max = " << r.round_max << '\n';
  os << "message_round_max = " << r.message_round_max << '\n';
  os.precision(old_precision);
}

/// One row per trial, for plotting elsewhere.
inline void write_trials_csv(std::ostream& os, const ExperimentReport& r) {
  os << "trial,seed,leaders,messages,rounds\n";
  for (const auto& t : r.records)
    os << t.trial << ',' << t.seed << ',' << t.leaders << ',' << t.messages << ',' << t.rounds << '\n';
}

}  // namespace elect
