#include "eeq/simulation.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "eeq/parallel.hpp"

namespace eeq {
namespace {

struct RunTally {
  std::uint64_t arrived = 0;
  std::uint64_t lost = 0;
  std::uint64_t slots = 0;
  std::vector<std::uint64_t> occupancy;
};

// Bernoulli(p) from one raw 64-bit draw: success iff draw < p * 2^64.
class BernoulliThreshold {
 public:
  explicit BernoulliThreshold(double p)
      : always_(p >= 1.0),
        threshold_(p <= 0.0 || p >= 1.0 ? 0 : static_cast<std::uint64_t>(std::ldexp(p, 64))) {}

  bool operator()(std::mt19937_64& engine) const { return always_ || engine() < threshold_; }

 private:
  bool always_;
  std::uint64_t threshold_;
};

std::mt19937_64 run_engine(std::uint64_t seed, std::uint64_t run) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(run), static_cast<std::uint32_t>(run >> 32)};
  return std::mt19937_64(seq);
}

RunTally simulate_run(const SimConfig& cfg, std::uint64_t run) {
  auto engine = run_engine(cfg.seed, run);
  const BernoulliThreshold arrives(cfg.queue.arrival_prob_q);
  const BernoulliThreshold succeeds(cfg.success_prob_f);
  const int K = cfg.queue.buffer_size_K;

  RunTally tally;
  if (cfg.track_occupancy) tally.occupancy.assign(static_cast<std::size_t>(K) + 1, 0);

  int state = cfg.initial_queue_state;
  auto step = [&](bool counting) {
    const bool arrival = arrives(engine);
    const bool on_air = state > 0 || arrival;
    const bool delivered = on_air && succeeds(engine);
    if (counting) {
      ++tally.slots;
      if (cfg.track_occupancy) ++tally.occupancy[state];
    }
    if (arrival) {
      if (counting) ++tally.arrived;
      if (state == K && !delivered) {
        if (counting) ++tally.lost;
        return;
      }
    }
    state += (arrival ? 1 : 0) - (delivered ? 1 : 0);
  };

  for (std::uint64_t s = 0; s < cfg.warmup_slots; ++s) step(false);
  while (tally.arrived < cfg.total_packets) step(true);
  return tally;
}

}  // namespace

void SimConfig::validate() const {
  if (std::isnan(success_prob_f) || success_prob_f < 0.0 || success_prob_f > 1.0) {
    throw std::invalid_argument("success probability must lie in [0, 1]");
  }
  if (total_packets < 1) throw std::invalid_argument("total_packets must be >= 1");
  if (num_runs < 1) throw std::invalid_argument("num_runs must be >= 1");
  if (initial_queue_state < 0 || initial_queue_state > queue.buffer_size_K) {
    throw std::invalid_argument("initial_queue_state must lie in 0..K");
  }
}

double pairwise_sum(const double* values, std::size_t count) {
  if (count <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += values[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

SimReport simulate(const SimConfig& config) {
  config.validate();
  const auto runs = static_cast<std::size_t>(config.num_runs);
  std::vector<double> losses(runs);
  std::vector<std::uint64_t> slots(runs);
  std::vector<std::vector<std::uint64_t>> occupancy(config.track_occupancy ? runs : 0);

  parallel_for(runs, [&](std::size_t r) {
    auto tally = simulate_run(config, r);
    losses[r] = static_cast<double>(tally.lost) / static_cast<double>(tally.arrived);
    slots[r] = tally.slots;
    if (config.track_occupancy) occupancy[r] = std::move(tally.occupancy);
  });

  const double n = static_cast<double>(runs);
  const double mean = pairwise_sum(losses.data(), runs) / n;
  std::vector<double> sq(runs);
  for (std::size_t r = 0; r < runs; ++r) sq[r] = (losses[r] - mean) * (losses[r] - mean);
  const double std_error = runs > 1 ? std::sqrt(pairwise_sum(sq.data(), runs) / (n - 1.0) / n) : 0.0;

  const double phi = packet_loss(config.queue, config.success_prob_f);
  double gap = 0.0;
  if (phi > 0.0) {
    gap = std::abs(mean - phi) / phi;
  } else if (mean > 0.0) {
    gap = std::numeric_limits<double>::infinity();
  }

  SimReport report{mean, std_error, phi, gap, std::nullopt, std::nullopt, 0};
  for (auto s : slots) report.total_slots += s;
  if (config.keep_per_run_losses) report.per_run_losses = std::move(losses);
  if (config.track_occupancy) {
    std::vector<double> hist(static_cast<std::size_t>(config.queue.buffer_size_K) + 1, 0.0);
    for (const auto& run_hist : occupancy) {
      for (std::size_t s = 0; s < hist.size(); ++s) hist[s] += static_cast<double>(run_hist[s]);
    }
    for (double& h : hist) h /= static_cast<double>(report.total_slots);
    report.occupancy = std::move(hist);
  }
  return report;
}

std::vector<ConvergenceRow> convergence_study(const SimConfig& config,
                                              const std::vector<std::uint64_t>& packet_counts) {
  if (packet_counts.empty()) throw std::invalid_argument("packet_counts must not be empty");
  std::vector<ConvergenceRow> rows;
  rows.reserve(packet_counts.size());
  for (auto count : packet_counts) {
    SimConfig cfg = config;
    cfg.total_packets = count;
    const auto report = simulate(cfg);
    rows.push_back({count, report.mean_loss_fraction, report.std_error, report.relative_gap});
  }
  return rows;
}

}  // namespace eeq
