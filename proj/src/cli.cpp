#include "eeq/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eeq/experiment.hpp"
#include "eeq/units.hpp"

namespace eeq {
namespace {

struct Overrides {
  std::string config_path;
  std::string out_path;
  std::optional<double> q;
  std::optional<int> K;
  std::optional<double> b_dbm;
  std::optional<double> b_over_sigma2;
  std::optional<double> sigma2_dbm;
  std::optional<double> pmax_dbm;
  std::optional<double> pmin_dbm;
  std::optional<double> epsilon;
  std::optional<double> R;
  std::optional<double> R0;
  std::optional<std::string> model;
  std::optional<double> kappa;
  std::optional<double> hh;
  std::optional<double> p_dbm;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> axis;
  std::optional<std::string> values;
  std::optional<std::uint64_t> runs;
  std::optional<std::uint64_t> packets;
  std::optional<double> f;
  std::optional<std::string> packet_counts;
};

void add_common_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "Config file ([system] [queue] [model] [sweep] [sim])");
  cmd->add_option("--out", o.out_path, "Write CSV here instead of stdout");
  cmd->add_option("--q", o.q, "Arrival probability per slot");
  cmd->add_option("--K", o.K, "Buffer size in packets");
  cmd->add_option("--b-dbm", o.b_dbm, "Fixed device power b (dBm)");
  cmd->add_option("--b-over-sigma2", o.b_over_sigma2, "Fixed power as a ratio b/sigma2 (linear)");
  cmd->add_option("--sigma2-dbm", o.sigma2_dbm, "Noise power (dBm)");
  cmd->add_option("--pmax-dbm", o.pmax_dbm, "Maximum transmit power (dBm)");
  cmd->add_option("--pmin-dbm", o.pmin_dbm, "Minimum transmit power (dBm)");
  cmd->add_option("--epsilon", o.epsilon, "Packet-loss bound");
  cmd->add_option("--R", o.R, "Transmission rate (bit/s)");
  cmd->add_option("--R0", o.R0, "Rate normalisation R0 (bit/s)");
  cmd->add_option("--model", o.model, "Success model")->check(CLI::IsMember({"exp", "qfunc"}));
  cmd->add_option("--kappa", o.kappa, "Q-function model spread constant");
  cmd->add_option("--hh", o.hh, "Q-function model channel gain |h|^2");
  cmd->add_option("--seed", o.seed, "Simulation seed");
}

void apply(const Overrides& o, ExperimentConfig& cfg) {
  auto& sys = cfg.system;
  if (o.R) sys.rate_R = *o.R;
  if (o.R0) cfg.rate_R0 = *o.R0;
  if (o.sigma2_dbm) sys.noise_sigma2 = dbm_to_watts(*o.sigma2_dbm);
  if (o.b_dbm && o.b_over_sigma2) throw ConfigError("--b-dbm and --b-over-sigma2 are exclusive");
  if (o.b_dbm) {
    sys.fixed_power_b = dbm_to_watts(*o.b_dbm);
    cfg.b_over_sigma2.reset();
  }
  if (o.b_over_sigma2) cfg.b_over_sigma2 = *o.b_over_sigma2;
  cfg.resolve_ratios();
  if (o.pmax_dbm) sys.p_max = dbm_to_watts(*o.pmax_dbm);
  if (o.pmin_dbm) sys.p_min = dbm_to_watts(*o.pmin_dbm);
  if (o.epsilon) sys.loss_bound_epsilon = *o.epsilon;
  if (o.p_dbm) cfg.eval_power_w = dbm_to_watts(*o.p_dbm);
  try {
    cfg.queue = QueueParams(o.q.value_or(cfg.queue.arrival_prob_q),
                            o.K.value_or(cfg.queue.buffer_size_K));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (o.model) cfg.model_kind = *o.model == "exp" ? ModelKind::exp : ModelKind::qfunc;
  if (o.kappa) cfg.spread_kappa = *o.kappa;
  if (o.hh) cfg.channel_gain_hh = *o.hh;
  if (o.seed) cfg.sim.seed = *o.seed;
  if (o.axis || o.values) {
    if (!o.axis || !o.values) throw ConfigError("--axis and --values go together");
    cfg.axis = SweepAxis{*o.axis, parse_number_list(*o.values)};
  }
  if (o.runs) cfg.sim.num_runs = *o.runs;
  if (o.packets) cfg.sim.total_packets = *o.packets;
  if (o.f) cfg.sim.success_prob_f = *o.f;
  if (o.packet_counts) {
    cfg.sim.packet_counts.clear();
    for (double v : parse_number_list(*o.packet_counts)) {
      if (v < 1 || v != static_cast<double>(static_cast<std::uint64_t>(v))) {
        throw ConfigError("--packet-counts entries must be positive integers");
      }
      cfg.sim.packet_counts.push_back(static_cast<std::uint64_t>(v));
    }
  }
  cfg.validate();
}

// Runs the writer into --out or the given stream.
template <typename Writer>
void emit(const std::string& out_path, std::ostream& out, Writer&& write) {
  if (out_path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(out_path);
  if (!file) throw ConfigError("cannot write '" + out_path + "'");
  write(file);
  out << "wrote " << out_path << '\n';
}

int run_eval(const ExperimentConfig& cfg, const std::string& out_path, std::ostream& out) {
  const auto point = efficiency(cfg.system, cfg.queue, cfg.make_model(), cfg.eval_power_w);
  emit(out_path, out, [&](std::ostream& s) {
    s << "p,eta,phi,f,feasible\n";
    s.precision(12);
    s << point.power_p << ',' << point.eta << ',' << point.phi << ',' << point.f << ','
      << (point.feasible ? 1 : 0) << '\n';
  });
  return kExitOk;
}

int run_optimize_cmd(const ExperimentConfig& cfg, const std::string& out_path, std::ostream& out,
                     std::ostream& err) {
  const auto rows = run_optimize(cfg);
  emit(out_path, out, [&](std::ostream& s) { write_optimize_csv(s, rows); });
  for (const auto& r : rows) {
    if (r.optimum.binding == Binding::infeasible) {
      err << "infeasible: packet loss exceeds epsilon = " << r.epsilon << " even at p_max (q = " << r.q
          << ", K = " << r.K << ")\n";
      return kExitInfeasible;
    }
  }
  return kExitOk;
}

int run_gain_cmd(const ExperimentConfig& cfg, const std::string& out_path, std::ostream& out,
                 std::ostream& err) {
  const auto rows = run_gain(cfg);
  emit(out_path, out, [&](std::ostream& s) { write_gain_csv(s, rows); });
  for (const auto& r : rows) {
    if (!r.gain_db) {
      err << "infeasible: no constrained optimum at axis value " << r.axis_value << '\n';
      return kExitInfeasible;
    }
  }
  return kExitOk;
}

int run_simulate_cmd(const ExperimentConfig& cfg, const std::string& out_path, std::ostream& out) {
  const double f = cfg.sim.success_prob_f.value_or(
      success_probability(cfg.make_model(), cfg.eval_power_w));
  SimConfig sim{cfg.queue, f, cfg.sim.total_packets, cfg.sim.num_runs, cfg.sim.seed,
                cfg.sim.initial_queue_state, cfg.sim.warmup_slots};
  try {
    sim.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  auto counts = cfg.sim.packet_counts;
  if (counts.empty()) counts.push_back(cfg.sim.total_packets);
  const auto rows = convergence_study(sim, counts);
  const double phi = packet_loss(cfg.queue, f);
  emit(out_path, out, [&](std::ostream& s) { write_simulation_csv(s, phi, rows); });
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy-efficient power control for a transmitter with a finite packet buffer", "eeq"};
  app.require_subcommand(1);

  Overrides o;
  auto* eval = app.add_subcommand("eval", "eta, packet loss and f at one transmit power");
  add_common_options(eval, o);
  eval->add_option("--p-dbm", o.p_dbm, "Transmit power (dBm)");

  auto* optimize = app.add_subcommand("optimize", "Unconstrained and constrained optimum");
  add_common_options(optimize, o);

  auto* sweep = app.add_subcommand("sweep", "eta over a power grid, optionally per axis value");
  add_common_options(sweep, o);

  auto* gain = app.add_subcommand("gain", "Cross-layer power gain in dB along an axis");
  add_common_options(gain, o);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo loss fraction against the closed form");
  add_common_options(sim, o);
  sim->add_option("--p-dbm", o.p_dbm, "Transmit power used to derive f (dBm)");

  auto* cases = app.add_subcommand("cases", "Base-station scenarios as percent of p_max");
  add_common_options(cases, o);

  for (auto* cmd : {optimize, sweep, gain}) {
    cmd->add_option("--axis", o.axis, "Axis: q, b_over_sigma2, K or epsilon");
    cmd->add_option("--values", o.values, "Comma-separated axis values, increasing");
  }
  sim->add_option("--runs", o.runs, "Independent runs");
  sim->add_option("--packets", o.packets, "Arrivals per run");
  sim->add_option("--f", o.f, "Success probability (overrides the model)");
  sim->add_option("--packet-counts", o.packet_counts, "Comma-separated packet counts to study");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    ExperimentConfig cfg = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
    apply(o, cfg);
    if (*eval) return run_eval(cfg, o.out_path, out);
    if (*optimize) return run_optimize_cmd(cfg, o.out_path, out, err);
    if (*sweep) {
      const auto rows = run_sweep(cfg);
      emit(o.out_path, out, [&](std::ostream& s) { write_sweep_csv(s, rows); });
      return kExitOk;
    }
    if (*gain) return run_gain_cmd(cfg, o.out_path, out, err);
    if (*sim) return run_simulate_cmd(cfg, o.out_path, out);
    if (*cases) {
      const auto rows = run_useful_cases(cfg);
      emit(o.out_path, out, [&](std::ostream& s) { write_useful_cases_csv(s, rows); });
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::domain_error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const NoInteriorMaximum& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitConfigError;
}

}  // namespace eeq
