#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "elect/error.hpp"
#include "elect/rng.hpp"

namespace elect {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

/// Probability that two independent uniform s-subsets of an n-set are
/// disjoint: C(n-s, s) / C(n, s), in lowest terms. Zero when 2s > n.
inline Rational no_common_referee_exact(std::uint64_t n, std::uint64_t s) {
  if (s < 1 || s > n) throw error(errc::precondition, "no_common_referee_exact needs 1 <= s <= n");
  if (2 * s > n) return Rational(0);
  return Rational(binomial(n - s, s), binomial(n, s));
}

inline std::vector<double> uniform_distribution(std::size_t bins) {
  if (bins < 1) throw error(errc::precondition, "distribution needs at least one bin");
  return std::vector<double>(bins, 1.0 / static_cast<double>(bins));
}

inline std::vector<double> point_mass(std::size_t bins) {
  if (bins < 1) throw error(errc::precondition, "distribution needs at least one bin");
  std::vector<double> p(bins, 0.0);
  p[0] = 1.0;
  return p;
}

/// `heavy` on bin 0, the rest spread evenly over the other bins.
inline std::vector<double> skewed_distribution(std::size_t bins, double heavy) {
  if (bins < 2) throw error(errc::precondition, "skewed distribution needs at least two bins");
  if (!(heavy >= 0.0 && heavy <= 1.0)) throw error(errc::precondition, "skew mass must lie in [0, 1]");
  std::vector<double> p(bins, (1.0 - heavy) / static_cast<double>(bins - 1));
  p[0] = heavy;
  return p;
}

/// Σ p_i².
inline double sum_squares(std::span<const double> distribution) {
  return std::accumulate(distribution.begin(), distribution.end(), 0.0, [](double acc, double p) { return acc + p * p; });
}

struct CollisionEstimate {
  std::size_t trials = 0;
  std::size_t no_collision = 0;
  double frequency = 0.0;
  /// Binomial standard error of `frequency`.
  double std_error = 0.0;
};

/// Monte-Carlo estimate of the chance that two independent throws of rho
/// balls into bins with probabilities `distribution` share no bin.
inline CollisionEstimate collision_mc(std::span<const double> distribution, std::size_t rho, std::size_t trials,
                                      std::uint64_t seed) {
  if (distribution.empty()) throw error(errc::precondition, "collision_mc needs a non-empty distribution");
  double total = 0.0;
  for (double p : distribution) {
    if (!(p >= 0.0)) throw error(errc::precondition, "collision_mc: negative or NaN probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw error(errc::precondition, "collision_mc: distribution sums to " + std::to_string(total));
  if (trials < 1) throw error(errc::precondition, "collision_mc needs trials >= 1");

  Rng rng(derive_seed(seed, stream::sampling));
  std::discrete_distribution<std::size_t> bin(distribution.begin(), distribution.end());
  // stamp[b] == trial + 1 marks bins hit by the first throw of this trial
  std::vector<std::size_t> stamp(distribution.size(), 0);
  CollisionEstimate est;
  est.trials = trials;
  for (std::size_t t = 1; t <= trials; ++t) {
    for (std::size_t i = 0; i < rho; ++i) stamp[bin(rng)] = t;
    bool hit = false;
    for (std::size_t i = 0; i < rho; ++i)
      if (stamp[bin(rng)] == t) hit = true;
    if (!hit) ++est.no_collision;
  }
  const double nt = static_cast<double>(trials);
  est.frequency = static_cast<double>(est.no_collision) / nt;
  est.std_error = std::sqrt(est.frequency * (1.0 - est.frequency) / nt);
  return est;
}

}  // namespace elect
