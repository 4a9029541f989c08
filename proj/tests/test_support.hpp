#pragma once

// Helpers shared by the unit and acceptance suites. Everything here is an
// independent oracle: it only calls the library's public model functions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "eeq/queue_model.hpp"

namespace eeq::testing {

inline double rel_err(double actual, double expected) {
  return std::abs(actual - expected) / std::max(std::abs(expected), 1e-300);
}

inline std::vector<double> log_space(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
  }
  return out;
}

inline std::vector<double> lin_space(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

/// Number of maximal plateaus: the sequence must rise (weakly) to its maximum
/// and then fall (weakly). Differences below rel_tol * max|v| count as flat.
/// Returns 1 for a unimodal sequence, more when it rises again after a fall.
inline int count_peaks(const std::vector<double>& v, double rel_tol = 1e-12) {
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  const double tol = rel_tol * scale;
  int peaks = 0;
  int last = 0;  // +1 rising, -1 falling, 0 nothing yet
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double d = v[i] - v[i - 1];
    const int sign = d > tol ? 1 : (d < -tol ? -1 : 0);
    if (sign == 0) continue;
    if (sign == -1 && last != -1) ++peaks;
    last = sign;
  }
  if (last == 1 || peaks == 0) ++peaks;  // maximum sits at the right end
  return peaks;
}

/// Number of strict sign changes in v, ignoring exact zeros.
inline int count_sign_changes(const std::vector<double>& v) {
  int changes = 0;
  int last = 0;
  for (double x : v) {
    const int sign = x > 0 ? 1 : (x < 0 ? -1 : 0);
    if (sign == 0) continue;
    if (last != 0 && sign != last) ++changes;
    last = sign;
  }
  return changes;
}

/// Stationary vector of the chain by power iteration pi <- pi P from the
/// uniform start, stopping when successive iterates differ by < 1e-15.
inline std::vector<double> power_iteration(const TransitionMatrix& P, int max_iter = 2'000'000) {
  std::vector<double> pi(P.states(), 1.0 / static_cast<double>(P.states()));
  for (int it = 0; it < max_iter; ++it) {
    auto next = P.left_multiply(pi);
    double total = 0.0;
    for (double x : next) total += x;
    double diff = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] /= total;
      diff = std::max(diff, std::abs(next[i] - pi[i]));
    }
    pi = std::move(next);
    if (diff < 1e-15) break;
  }
  return pi;
}

/// Exact expected loss fraction of one simulation run (N arrivals, buffer
/// starting in state s0, no warm-up), by dynamic programming over
/// (arrivals seen, queue length) slot by slot.
inline double exact_transient_loss(double q, double f, int K, int N, int s0 = 0) {
  const std::size_t states = static_cast<std::size_t>(K) + 1;
  std::vector<double> dist(static_cast<std::size_t>(N) * states, 0.0);
  auto at = [&](std::vector<double>& d, int a, int s) -> double& { return d[a * states + s]; };
  at(dist, 0, s0) = 1.0;
  double lost = 0.0;
  double mass = 1.0;
  while (mass > 1e-15) {
    std::vector<double> next(dist.size(), 0.0);
    mass = 0.0;
    for (int a = 0; a < N; ++a) {
      for (int s = 0; s <= K; ++s) {
        const double m = at(dist, a, s);
        if (m == 0.0) continue;
        const double idle = m * (1.0 - q);
        if (s == 0) {
          at(next, a, 0) += idle;
        } else {
          at(next, a, s) += idle * (1.0 - f);
          at(next, a, s - 1) += idle * f;
        }
        const double arrival = m * q;
        if (s == K) lost += arrival * (1.0 - f);
        if (a + 1 < N) {
          if (s == K) {
            at(next, a + 1, K) += arrival;
          } else {
            at(next, a + 1, s) += arrival * f;
            at(next, a + 1, s + 1) += arrival * (1.0 - f);
          }
        }
      }
    }
    dist = std::move(next);
    for (double m : dist) mass += m;
  }
  return lost / N;
}

}  // namespace eeq::testing
