#pragma once

#include <cstddef>
#include <vector>

namespace eeq {

/// Bernoulli(q) arrivals into a buffer with K slots (states 0..K).
struct QueueParams {
  double arrival_prob_q;
  int buffer_size_K;

  /// Throws std::invalid_argument unless 0 < q <= 1 and K >= 1.
  QueueParams(double arrival_prob_q, int buffer_size_K);
};

struct StationaryDistribution {
  std::vector<double> probs;  // indexed by queue length 0..K
  double load_rho;
};

/// Row-stochastic transition matrix: at(i, j) = P(next state = j | state = i).
class TransitionMatrix {
 public:
  explicit TransitionMatrix(std::size_t states) : n_(states), data_(states * states, 0.0) {}

  std::size_t states() const { return n_; }
  double& at(std::size_t from, std::size_t to) { return data_[from * n_ + to]; }
  double at(std::size_t from, std::size_t to) const { return data_[from * n_ + to]; }

  /// Row vector times matrix: (pi * P)_j = sum_i pi_i P(i, j).
  std::vector<double> left_multiply(const std::vector<double>& pi) const;

 private:
  std::size_t n_;
  std::vector<double> data_;
};

/// rho = q(1-f) / ((1-q) f). Returns +infinity when q = 1 or f = 0.
/// Throws std::domain_error for f outside [0, 1].
double load_rho(const QueueParams& queue, double f);

TransitionMatrix transition_matrix(const QueueParams& queue, double f);

/// Geometric closed form Pi_s proportional to rho^s. Uniform when rho is within
/// 1e-9 of 1; point mass on K when rho is infinite.
StationaryDistribution stationary_distribution(const QueueParams& queue, double f);

/// Pi_K, identical to stationary_distribution(queue, f).probs.back().
double full_buffer_prob(const QueueParams& queue, double f);

/// Fraction of arriving packets that are blocked, (1 - f) * Pi_K.
double packet_loss(const QueueParams& queue, double f);

struct InfiniteBufferLoss {
  double value;
  bool exceeds_unity;  // the expression is not a probability here
};

/// Closed form (1 - f)/q for f < q, 0 otherwise, returned unclamped.
///
/// This is the commonly quoted large-buffer expression. It does not match the
/// K -> infinity limit of packet_loss, which is 1 - f/q (see
/// infinite_buffer_loss_limit); it is kept for comparison with that form.
InfiniteBufferLoss infinite_K_loss(double q, double f);

/// lim_{K->inf} Pi_K: (rho - 1)/rho for rho > 1, 0 for rho <= 1.
double infinite_buffer_full_prob(double q, double f);

/// lim_{K->inf} packet_loss = (1 - f) (rho - 1)/rho = 1 - f/q for f < q, 0 otherwise.
double infinite_buffer_loss_limit(double q, double f);

}  // namespace eeq
