#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eeq/queue_model.hpp"

namespace eeq {

struct SimConfig {
  QueueParams queue;
  double success_prob_f;
  std::uint64_t total_packets;  // arrivals observed per run
  std::uint64_t num_runs;
  std::uint64_t seed;
  int initial_queue_state = 0;
  std::uint64_t warmup_slots = 0;  // slots simulated before counting starts
  bool keep_per_run_losses = false;
  bool track_occupancy = false;

  /// Throws std::invalid_argument on an invalid configuration.
  void validate() const;
};

struct SimReport {
  double mean_loss_fraction;
  double std_error;
  double theoretical_phi;
  double relative_gap;  // |mean - phi| / phi; 0 if both are 0, +inf if only phi is 0
  std::optional<std::vector<double>> per_run_losses;
  /// Fraction of counted slots spent in each state, pooled over runs.
  std::optional<std::vector<double>> occupancy;
  std::uint64_t total_slots;
};

/// Time-slotted simulation of the finite buffer.
///
/// Each slot draws an arrival with probability q and, whenever a packet is on
/// the radio interface (a queued packet, or the arriving one when the buffer
/// is empty), a transmission success with probability f. An arrival is lost
/// iff the buffer held K packets at slot start and the head packet failed.
/// The loss fraction of a run is lost / arrived over total_packets arrivals.
/// Run r uses its own generator seeded from (seed, r), so reports do not
/// depend on the number of worker threads.
SimReport simulate(const SimConfig& config);

struct ConvergenceRow {
  std::uint64_t packet_count;
  double mean_loss;
  double std_error;
  double relative_gap;
};

/// Runs simulate() at each packet count with the rest of config unchanged.
std::vector<ConvergenceRow> convergence_study(const SimConfig& config,
                                              const std::vector<std::uint64_t>& packet_counts);

/// Sum of values by pairwise recursion; its result depends only on the order of values.
double pairwise_sum(const double* values, std::size_t count);

}  // namespace eeq
