#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "elect/error.hpp"
#include "elect/topology.hpp"

namespace elect {

struct WalkProfile {
  std::vector<double> stationary;
  std::size_t mixing_time = 0;
  bool lazy_applied = false;
};

struct MixingOptions {
  /// Iteration cap; 0 means 64 * n.
  std::size_t max_iterations = 0;
  /// Dense computations are refused above this size.
  std::size_t max_nodes = 4096;
};

namespace detail {

// Slack on the 1/(2n) threshold. K_3 sits exactly on it.
inline constexpr double mixing_slack = 1e-12;

inline double mixing_threshold(std::size_t n) { return 1.0 / (2.0 * static_cast<double>(n)) + mixing_slack; }

/// One step of the walk distribution: out = in * P, with P the (lazy) transition matrix.
inline void walk_step(const Topology& t, bool lazy, std::span<const double> in, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  const double move = lazy ? 0.5 : 1.0;
  for (NodeId u = 0; u < t.size(); ++u) {
    const double mass = in[u];
    if (mass == 0.0) continue;
    if (lazy) out[u] += 0.5 * mass;
    const double share = move * mass / static_cast<double>(t.degree(u));
    for (NodeId v : t.neighbors(u)) out[v] += share;
  }
}

}  // namespace detail

/// Apply one transition step of the (lazy, if flagged) walk to a distribution.
inline std::vector<double> transition(const Topology& t, std::span<const double> dist, bool lazy) {
  std::vector<double> out(t.size());
  detail::walk_step(t, lazy, dist, out);
  return out;
}

/// Smallest k such that for every point-mass start e_i the distribution after
/// k + 1 walk steps is within 1/(2n) of stationary in max norm. Point masses
/// suffice: the deviation is linear in the start vector and every start
/// distribution is a convex combination of them.
inline WalkProfile mixing_time(const Topology& t, const MixingOptions& options = {}) {
  const std::size_t n = t.size();
  if (n > options.max_nodes) throw error(errc::invalid_size, "mixing time is computed densely; n=" + std::to_string(n) + " exceeds the cap");
  if (!t.connected()) throw error(errc::precondition, "mixing time needs a connected topology");
  if (t.bipartite() && !t.lazy())
    throw error(errc::no_convergence, "walk on a bipartite topology oscillates; enable the lazy walk");

  WalkProfile profile;
  profile.stationary = stationary_distribution(t);
  profile.lazy_applied = t.lazy();
  if (n == 1) return profile;

  const std::size_t cap = options.max_iterations ? options.max_iterations : 64 * n;
  const double threshold = detail::mixing_threshold(n);
  const auto& pi = profile.stationary;

  // ok[k] stays true while every start examined so far satisfies the predicate at k.
  std::size_t horizon = std::min<std::size_t>(cap, 32);
  for (;;) {
    std::vector<char> ok(horizon + 1, 1);
    std::vector<double> cur(n), next(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::fill(cur.begin(), cur.end(), 0.0);
      cur[s] = 1.0;
      for (std::size_t k = 0; k <= horizon; ++k) {
        detail::walk_step(t, t.lazy(), cur, next);
        if (ok[k]) {
          double dev = 0.0;
          for (std::size_t j = 0; j < n; ++j) dev = std::max(dev, std::abs(next[j] - pi[j]));
          if (dev > threshold) ok[k] = 0;
        }
        std::swap(cur, next);
      }
    }
    auto hit = std::find(ok.begin(), ok.end(), char{1});
    if (hit != ok.end()) {
      profile.mixing_time = static_cast<std::size_t>(hit - ok.begin());
      return profile;
    }
    if (horizon >= cap) throw error(errc::convergence_failure, "no mixing within " + std::to_string(cap) + " iterations");
    horizon = std::min(cap, horizon * 2);
  }
}

/// Independent re-check of the mixing predicate at k, using the dense
/// transition matrix raised to the power k + 1 by repeated squaring.
inline bool verify_mixing(const Topology& t, std::size_t k) {
  const std::size_t n = t.size();
  if (!t.connected()) throw error(errc::precondition, "verify_mixing needs a connected topology");
  if (n == 1) return true;
  using Matrix = Eigen::MatrixXd;
  Matrix step = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v : t.neighbors(u)) step(u, v) = 1.0 / static_cast<double>(t.degree(u));
  if (t.lazy()) step = 0.5 * (step + Matrix::Identity(step.rows(), step.cols()));

  Matrix power = Matrix::Identity(step.rows(), step.cols());
  Matrix base = step;
  for (std::size_t e = k + 1; e > 0; e >>= 1) {
    if (e & 1) power = power * base;
    if (e > 1) base = base * base;
  }

  Eigen::RowVectorXd pi(static_cast<Eigen::Index>(n));
  const double total = 2.0 * static_cast<double>(t.edge_count());
  for (NodeId u = 0; u < n; ++u) pi(u) = static_cast<double>(t.degree(u)) / total;
  const double worst = (power.rowwise() - pi).cwiseAbs().maxCoeff();
  return worst <= detail::mixing_threshold(n);
}

}  // namespace elect
