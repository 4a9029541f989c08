#include "eeq/queue_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace eeq {
namespace {

constexpr double kUniformBand = 1e-9;

void check_success_prob(double f) {
  if (std::isnan(f) || f < 0.0 || f > 1.0) {
    throw std::domain_error("success probability must lie in [0, 1]");
  }
}

void check_limit_args(double q, double f) {
  if (std::isnan(q) || !(q > 0.0) || q > 1.0) {
    throw std::domain_error("arrival probability must lie in (0, 1]");
  }
  if (std::isnan(f) || !(f > 0.0) || f > 1.0) {
    throw std::domain_error("success probability must lie in (0, 1]");
  }
}

// Unnormalized weights w_s with w_s / sum(w) = Pi_s. For rho > 1 the weights
// are rho^(s-K) so that nothing overflows at large K.
std::vector<double> geometric_weights(double rho, int K) {
  std::vector<double> w(static_cast<std::size_t>(K) + 1);
  if (rho <= 1.0) {
    double term = 1.0;
    for (int s = 0; s <= K; ++s) {
      w[s] = term;
      term *= rho;
    }
  } else {
    const double inv = 1.0 / rho;
    double term = 1.0;
    for (int s = K; s >= 0; --s) {
      w[s] = term;
      term *= inv;
    }
  }
  return w;
}

double sum_in_increasing_magnitude(const std::vector<double>& w, double rho) {
  double total = 0.0;
  if (rho <= 1.0) {
    for (auto it = w.rbegin(); it != w.rend(); ++it) total += *it;
  } else {
    for (double v : w) total += v;
  }
  return total;
}

}  // namespace

QueueParams::QueueParams(double arrival_prob_q, int buffer_size_K)
    : arrival_prob_q(arrival_prob_q), buffer_size_K(buffer_size_K) {
  if (std::isnan(arrival_prob_q) || !(arrival_prob_q > 0.0) || arrival_prob_q > 1.0) {
    throw std::invalid_argument("arrival probability q must lie in (0, 1]");
  }
  if (buffer_size_K < 1) {
    throw std::invalid_argument("buffer size K must be at least 1");
  }
}

std::vector<double> TransitionMatrix::left_multiply(const std::vector<double>& pi) const {
  std::vector<double> out(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const double weight = pi[i];
    if (weight == 0.0) continue;
    const double* row = &data_[i * n_];
    for (std::size_t j = 0; j < n_; ++j) out[j] += weight * row[j];
  }
  return out;
}

double load_rho(const QueueParams& queue, double f) {
  check_success_prob(f);
  const double q = queue.arrival_prob_q;
  if (q == 1.0 || f == 0.0) return std::numeric_limits<double>::infinity();
  return q * (1.0 - f) / ((1.0 - q) * f);
}

TransitionMatrix transition_matrix(const QueueParams& queue, double f) {
  check_success_prob(f);
  const double q = queue.arrival_prob_q;
  const auto K = static_cast<std::size_t>(queue.buffer_size_K);
  const double up = q * (1.0 - f);
  const double down = (1.0 - q) * f;

  TransitionMatrix P(K + 1);
  P.at(0, 0) = 1.0 - q + q * f;
  P.at(0, 1) = up;
  for (std::size_t s = 1; s < K; ++s) {
    P.at(s, s - 1) = down;
    P.at(s, s) = (1.0 - q) * (1.0 - f) + f * q;
    P.at(s, s + 1) = up;
  }
  P.at(K, K - 1) = down;
  P.at(K, K) = (1.0 - q) * (1.0 - f) + q;
  return P;
}

StationaryDistribution stationary_distribution(const QueueParams& queue, double f) {
  const double rho = load_rho(queue, f);
  const int K = queue.buffer_size_K;
  StationaryDistribution out{std::vector<double>(static_cast<std::size_t>(K) + 1, 0.0), rho};

  if (std::isinf(rho)) {
    out.probs.back() = 1.0;
    return out;
  }
  if (std::abs(rho - 1.0) < kUniformBand) {
    for (double& v : out.probs) v = 1.0 / (K + 1);
    return out;
  }
  auto w = geometric_weights(rho, K);
  const double total = sum_in_increasing_magnitude(w, rho);
  for (std::size_t s = 0; s < w.size(); ++s) out.probs[s] = w[s] / total;
  return out;
}

double full_buffer_prob(const QueueParams& queue, double f) {
  return stationary_distribution(queue, f).probs.back();
}

double packet_loss(const QueueParams& queue, double f) {
  return (1.0 - f) * full_buffer_prob(queue, f);
}

InfiniteBufferLoss infinite_K_loss(double q, double f) {
  check_limit_args(q, f);
  if (f >= q) return {0.0, false};
  const double value = (1.0 - f) / q;
  return {value, value > 1.0};
}

double infinite_buffer_full_prob(double q, double f) {
  check_limit_args(q, f);
  if (f >= q) return 0.0;
  if (q == 1.0) return 1.0;
  // (rho - 1)/rho = 1 - (1-q) f / (q (1-f)) = (q - f) / (q (1 - f))
  return (q - f) / (q * (1.0 - f));
}

double infinite_buffer_loss_limit(double q, double f) {
  check_limit_args(q, f);
  if (f >= q) return 0.0;
  return (q - f) / q;
}

}  // namespace eeq
