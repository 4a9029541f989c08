#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eeq/efficiency.hpp"
#include "eeq/optimizer.hpp"
#include "eeq/simulation.hpp"

namespace eeq {

/// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind { exp, qfunc };

/// Outer parameter varied by sweeps, optimize tables and gain curves.
struct SweepAxis {
  std::string name;  // q, b_over_sigma2, K or epsilon
  std::vector<double> values;
};

/// Log-spaced transmit powers, in watts.
struct PowerGrid {
  double start_w;
  double stop_w;
  int points;

  std::vector<double> powers() const;
};

struct SimOptions {
  std::optional<double> success_prob_f;  // default: f at the evaluation power
  std::uint64_t total_packets = 1000;
  std::uint64_t num_runs = 10000;
  std::uint64_t seed = 1;
  int initial_queue_state = 0;
  std::uint64_t warmup_slots = 0;
  std::vector<std::uint64_t> packet_counts;  // empty: just total_packets
};

/// Everything one CLI invocation needs. Powers are held in watts.
struct ExperimentConfig {
  SystemParams system{4000.0, 0.1, 1.0, 1e-3, 1e-2, 3.1622776601683795, 1.0};
  QueueParams queue{0.5, 10};
  ModelKind model_kind = ModelKind::exp;
  double rate_R0 = 1000.0;
  std::optional<double> spread_kappa;
  double channel_gain_hh = 1.0;
  std::optional<double> b_over_sigma2;  // when set, b = ratio * sigma2
  double eval_power_w = 1e-2;
  std::optional<SweepAxis> axis;
  PowerGrid power_grid{1e-4, 10.0, 400};
  SimOptions sim;

  /// Applies b_over_sigma2 to system.fixed_power_b.
  void resolve_ratios();
  /// Throws ConfigError when the selected model lacks a parameter.
  SuccessModel make_model() const;
  void validate() const;
};

/// Copy of cfg with the named axis parameter set to value. b_over_sigma2 sets
/// b = value * sigma2.
ExperimentConfig with_axis_value(const ExperimentConfig& cfg, const std::string& axis, double value);

/// Parses the sectioned key = value format ([system] [queue] [model] [sweep]
/// [sim]) on top of the defaults in base. Powers are dBm unless the key ends
/// in _w. Throws ConfigError.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// Parses "0.1,0.2,0.5" into numbers. Throws ConfigError.
std::vector<double> parse_number_list(const std::string& text);

struct SweepRow {
  double axis_value;
  EfficiencyPoint point;
};

/// eta over the power grid for each axis value (axis_value = p without an axis).
/// Rows are ordered by axis value, then by power.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg);

struct OptimizeRow {
  double q;
  int K;
  double b;
  double sigma2;
  double epsilon;
  Optimum optimum;
};

std::vector<OptimizeRow> run_optimize(const ExperimentConfig& cfg);

struct GainRow {
  double axis_value;
  std::optional<double> p_star_q1;  // constrained optimum at q = 1
  std::optional<double> p_star;     // constrained optimum at the configured q
  std::optional<double> gain_db;
};

/// Cross-layer power gain along the axis (default: q). Both optima use the
/// same epsilon and power range, so gain_db is 0 at q = 1.
std::vector<GainRow> run_gain(const ExperimentConfig& cfg);

struct UsefulCaseRow {
  double q;
  double snr_db;
  double b_w;
  double sigma2_w;
  double p_star;
  double percent_of_pmax;
};

/// Base-station scenarios: R = 256 kbit/s, R0 = 64 kbit/s, exponential model,
/// idle power at half the full-load power (b = a * p_max), sigma2 = p_max /
/// SNR, for q in {0.5, 1/25} and SNR in {20, 30} dB.
std::vector<UsefulCaseRow> run_useful_cases(const ExperimentConfig& cfg);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_optimize_csv(std::ostream& out, const std::vector<OptimizeRow>& rows);
void write_gain_csv(std::ostream& out, const std::vector<GainRow>& rows);
void write_useful_cases_csv(std::ostream& out, const std::vector<UsefulCaseRow>& rows);
void write_simulation_csv(std::ostream& out, double theoretical_phi,
                          const std::vector<ConvergenceRow>& rows);

}  // namespace eeq
