#include "eeq/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "eeq/parallel.hpp"
#include "eeq/units.hpp"

namespace eeq {
namespace {

namespace pt = boost::property_tree;

double to_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "': not a number: '" + text + "'");
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size()) throw ConfigError("'" + key + "': trailing characters in '" + text + "'");
  return value;
}

std::optional<double> number(const pt::ptree& tree, const std::string& key) {
  if (auto raw = tree.get_optional<std::string>(pt::ptree::path_type(key, '/'))) {
    return to_number(key, *raw);
  }
  return std::nullopt;
}

// Reads key (dBm) or key_w (watts); specifying both is an error.
std::optional<double> power(const pt::ptree& tree, const std::string& key) {
  auto dbm = number(tree, key);
  auto watts = number(tree, key + "_w");
  if (dbm && watts) throw ConfigError("both '" + key + "' and '" + key + "_w' given");
  if (dbm) return dbm_to_watts(*dbm);
  return watts;
}

std::uint64_t count(const std::string& key, double value) {
  if (!(value >= 0.0) || value != std::floor(value) || value > 1.8e19) {
    throw ConfigError("'" + key + "' must be a nonnegative integer");
  }
  return static_cast<std::uint64_t>(value);
}

std::vector<double> axis_values(const pt::ptree& sweep) {
  if (auto list = sweep.get_optional<std::string>("values")) return parse_number_list(*list);
  auto start = number(sweep, "start");
  auto stop = number(sweep, "stop");
  auto num = number(sweep, "num");
  if (!start || !stop || !num) {
    throw ConfigError("[sweep] needs 'values' or 'start', 'stop' and 'num'");
  }
  const auto n = count("num", *num);
  if (n < 1) throw ConfigError("[sweep] num must be >= 1");
  const bool log_spacing = sweep.get<std::string>("spacing", "linear") == "log";
  if (log_spacing && !(*start > 0.0 && *stop > 0.0)) {
    throw ConfigError("[sweep] log spacing needs positive start and stop");
  }
  std::vector<double> out(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = log_spacing ? std::exp(std::log(*start) + t * (std::log(*stop) - std::log(*start)))
                         : *start + t * (*stop - *start);
  }
  return out;
}

void check_axis(const SweepAxis& axis) {
  static const char* known[] = {"q", "b_over_sigma2", "K", "epsilon"};
  if (std::find(std::begin(known), std::end(known), axis.name) == std::end(known)) {
    throw ConfigError("unknown sweep axis '" + axis.name + "'");
  }
  if (axis.values.empty()) throw ConfigError("sweep axis has no values");
  if (!std::is_sorted(axis.values.begin(), axis.values.end())) {
    throw ConfigError("sweep axis values must be in increasing order");
  }
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : "infeasible"; }

std::vector<double> axis_or(const ExperimentConfig& cfg, double fallback) {
  return cfg.axis ? cfg.axis->values : std::vector<double>{fallback};
}

}  // namespace

std::vector<double> PowerGrid::powers() const {
  std::vector<double> out(static_cast<std::size_t>(points));
  if (points == 1) {
    out[0] = start_w;
    return out;
  }
  const double lo = std::log(start_w);
  const double step = (std::log(stop_w) - lo) / (points - 1);
  for (int i = 0; i < points; ++i) out[i] = std::exp(lo + step * i);
  return out;
}

void ExperimentConfig::resolve_ratios() {
  if (b_over_sigma2) system.fixed_power_b = *b_over_sigma2 * system.noise_sigma2;
}

SuccessModel ExperimentConfig::make_model() const {
  if (model_kind == ModelKind::exp) {
    return ExpUnknownChannel(system.rate_R, rate_R0, system.noise_sigma2);
  }
  if (!spread_kappa) throw ConfigError("model 'qfunc' requires kappa");
  return QKnownChannel(system.rate_R, rate_R0, *spread_kappa, channel_gain_hh, system.noise_sigma2);
}

void ExperimentConfig::validate() const {
  try {
    system.validate();
    (void)make_model();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(power_grid.start_w > 0.0) || !(power_grid.stop_w >= power_grid.start_w) ||
      power_grid.points < 1) {
    throw ConfigError("power grid must satisfy 0 < p_start <= p_stop and p_points >= 1");
  }
  if (!(eval_power_w > 0.0)) throw ConfigError("evaluation power must be > 0");
  if (axis) check_axis(*axis);
}

ExperimentConfig with_axis_value(const ExperimentConfig& cfg, const std::string& axis, double value) {
  ExperimentConfig out = cfg;
  try {
    if (axis == "q") {
      out.queue = QueueParams(value, cfg.queue.buffer_size_K);
    } else if (axis == "K") {
      if (value != std::floor(value)) throw ConfigError("K must be an integer");
      out.queue = QueueParams(cfg.queue.arrival_prob_q, static_cast<int>(value));
    } else if (axis == "b_over_sigma2") {
      out.b_over_sigma2 = value;
      out.resolve_ratios();
    } else if (axis == "epsilon") {
      out.system.loss_bound_epsilon = value;
    } else {
      throw ConfigError("unknown sweep axis '" + axis + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return out;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) throw ConfigError("empty entry in list '" + text + "'");
    out.push_back(to_number("list", item.substr(first)));
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig cfg) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  static const char* sections[] = {"system", "queue", "model", "sweep", "sim"};
  for (const auto& [name, _] : tree) {
    if (std::find(std::begin(sections), std::end(sections), name) == std::end(sections)) {
      throw ConfigError("unknown config section [" + name + "]");
    }
  }

  static const pt::ptree empty;
  const auto& sys = tree.get_child("system", empty);
  if (auto v = number(sys, "R")) cfg.system.rate_R = *v;
  if (auto v = number(sys, "a")) cfg.system.amp_coeff_a = *v;
  if (auto v = power(sys, "sigma2")) cfg.system.noise_sigma2 = *v;
  if (auto v = power(sys, "b")) {
    cfg.system.fixed_power_b = *v;
    cfg.b_over_sigma2.reset();
  }
  if (auto v = number(sys, "b_over_sigma2")) {
    if (power(sys, "b")) throw ConfigError("both 'b' and 'b_over_sigma2' given");
    cfg.b_over_sigma2 = *v;
  }
  if (auto v = power(sys, "p_min")) cfg.system.p_min = *v;
  if (auto v = number(sys, "p_min_snr_db")) cfg.system.p_min = db_to_ratio(*v) * cfg.system.noise_sigma2;
  if (auto v = power(sys, "p_max")) cfg.system.p_max = *v;
  if (auto v = number(sys, "epsilon")) cfg.system.loss_bound_epsilon = *v;
  if (auto v = power(sys, "p")) cfg.eval_power_w = *v;

  const auto& queue = tree.get_child("queue", empty);
  {
    double q = cfg.queue.arrival_prob_q;
    int K = cfg.queue.buffer_size_K;
    if (auto v = number(queue, "q")) q = *v;
    if (auto v = number(queue, "K")) K = static_cast<int>(count("K", *v));
    try {
      cfg.queue = QueueParams(q, K);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  const auto& model = tree.get_child("model", empty);
  if (auto type = model.get_optional<std::string>("type")) {
    if (*type == "exp") {
      cfg.model_kind = ModelKind::exp;
    } else if (*type == "qfunc") {
      cfg.model_kind = ModelKind::qfunc;
    } else {
      throw ConfigError("unknown model type '" + *type + "'");
    }
  }
  if (auto v = number(model, "R0")) cfg.rate_R0 = *v;
  if (auto v = number(model, "kappa")) cfg.spread_kappa = *v;
  if (auto v = number(model, "hh")) cfg.channel_gain_hh = *v;

  if (auto sweep = tree.get_child_optional("sweep")) {
    if (auto axis = sweep->get_optional<std::string>("axis")) {
      cfg.axis = SweepAxis{*axis, axis_values(*sweep)};
    }
    if (auto v = power(*sweep, "p_start")) cfg.power_grid.start_w = *v;
    if (auto v = power(*sweep, "p_stop")) cfg.power_grid.stop_w = *v;
    if (auto v = number(*sweep, "p_points")) cfg.power_grid.points = static_cast<int>(count("p_points", *v));
  }

  const auto& sim = tree.get_child("sim", empty);
  if (auto v = number(sim, "f")) cfg.sim.success_prob_f = *v;
  if (auto v = number(sim, "packets")) cfg.sim.total_packets = count("packets", *v);
  if (auto v = number(sim, "runs")) cfg.sim.num_runs = count("runs", *v);
  if (auto v = number(sim, "seed")) cfg.sim.seed = count("seed", *v);
  if (auto v = number(sim, "initial_state")) cfg.sim.initial_queue_state = static_cast<int>(count("initial_state", *v));
  if (auto v = number(sim, "warmup_slots")) cfg.sim.warmup_slots = count("warmup_slots", *v);
  if (auto list = sim.get_optional<std::string>("packet_counts")) {
    cfg.sim.packet_counts.clear();
    for (double v : parse_number_list(*list)) cfg.sim.packet_counts.push_back(count("packet_counts", v));
  }
  cfg.resolve_ratios();
  return cfg;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, std::move(base));
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto powers = cfg.power_grid.powers();
  const auto values = axis_or(cfg, 0.0);
  std::vector<SweepRow> rows(values.size() * powers.size());
  parallel_for(values.size(), [&](std::size_t i) {
    const auto local = cfg.axis ? with_axis_value(cfg, cfg.axis->name, values[i]) : cfg;
    const auto model = local.make_model();
    for (std::size_t j = 0; j < powers.size(); ++j) {
      const auto point = efficiency(local.system, local.queue, model, powers[j]);
      rows[i * powers.size() + j] = {cfg.axis ? values[i] : powers[j], point};
    }
  });
  return rows;
}

std::vector<OptimizeRow> run_optimize(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto values = axis_or(cfg, 0.0);
  std::vector<OptimizeRow> rows(values.size());
  parallel_for(values.size(), [&](std::size_t i) {
    const auto local = cfg.axis ? with_axis_value(cfg, cfg.axis->name, values[i]) : cfg;
    rows[i] = {local.queue.arrival_prob_q, local.queue.buffer_size_K, local.system.fixed_power_b,
               local.system.noise_sigma2, local.system.loss_bound_epsilon,
               maximize_constrained(local.system, local.queue, local.make_model())};
  });
  return rows;
}

std::vector<GainRow> run_gain(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string axis = cfg.axis ? cfg.axis->name : "q";
  const auto values = axis_or(cfg, cfg.queue.arrival_prob_q);
  std::vector<GainRow> rows(values.size());
  parallel_for(values.size(), [&](std::size_t i) {
    const auto local = with_axis_value(cfg, axis, values[i]);
    const auto model = local.make_model();
    const QueueParams saturated(1.0, local.queue.buffer_size_K);
    GainRow row{values[i], std::nullopt, std::nullopt, std::nullopt};
    row.p_star_q1 = maximize_constrained(local.system, saturated, model).p_star_constrained;
    row.p_star = maximize_constrained(local.system, local.queue, model).p_star_constrained;
    if (row.p_star_q1 && row.p_star) row.gain_db = power_gain_db(*row.p_star_q1, *row.p_star);
    rows[i] = row;
  });
  return rows;
}

std::vector<UsefulCaseRow> run_useful_cases(const ExperimentConfig& cfg) {
  const double p_max = cfg.system.p_max;
  const double a = cfg.system.amp_coeff_a;
  std::vector<UsefulCaseRow> rows;
  for (double q : {0.5, 1.0 / 25.0}) {
    for (double snr_db : {20.0, 30.0}) {
      SystemParams sys = cfg.system;
      sys.rate_R = 256e3;
      sys.noise_sigma2 = p_max / db_to_ratio(snr_db);
      sys.fixed_power_b = a * p_max;
      sys.p_min = std::min(sys.p_min, sys.noise_sigma2 * 1e-3);
      sys.loss_bound_epsilon = 1.0;
      const ExpUnknownChannel model(sys.rate_R, 64e3, sys.noise_sigma2);
      const auto opt = maximize_unconstrained(sys, QueueParams(q, cfg.queue.buffer_size_K), model);
      rows.push_back({q, snr_db, sys.fixed_power_b, sys.noise_sigma2, opt.p_star,
                      100.0 * opt.p_star / p_max});
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "axis_value,p,eta,phi,f,feasible\n";
  for (const auto& r : rows) {
    out << fmt(r.axis_value) << ',' << fmt(r.point.power_p) << ',' << fmt(r.point.eta) << ','
        << fmt(r.point.phi) << ',' << fmt(r.point.f) << ',' << (r.point.feasible ? 1 : 0) << '\n';
  }
}

void write_optimize_csv(std::ostream& out, const std::vector<OptimizeRow>& rows) {
  out << "q,K,b,sigma2,epsilon,p_star,p0,p_star_constrained,eta_star,binding\n";
  for (const auto& r : rows) {
    out << fmt(r.q) << ',' << r.K << ',' << fmt(r.b) << ',' << fmt(r.sigma2) << ','
        << fmt(r.epsilon) << ',' << fmt(r.optimum.p_star) << ',' << fmt(r.optimum.p0) << ','
        << fmt(r.optimum.p_star_constrained) << ',' << fmt(r.optimum.eta_star) << ','
        << to_string(r.optimum.binding) << '\n';
  }
}

void write_gain_csv(std::ostream& out, const std::vector<GainRow>& rows) {
  out << "axis_value,p_star_q1,p_star,gain_db\n";
  for (const auto& r : rows) {
    out << fmt(r.axis_value) << ',' << fmt(r.p_star_q1) << ',' << fmt(r.p_star) << ','
        << fmt(r.gain_db) << '\n';
  }
}

void write_useful_cases_csv(std::ostream& out, const std::vector<UsefulCaseRow>& rows) {
  out << "# assumption: percent_of_pmax = 100 * p_star / p_max with p_max from [system];"
         " idle power b = a * p_max (half of full-load power); sigma2 = p_max / SNR\n";
  out << "q,snr_db,b,sigma2,p_star,percent_of_pmax\n";
  for (const auto& r : rows) {
    out << fmt(r.q) << ',' << fmt(r.snr_db) << ',' << fmt(r.b_w) << ',' << fmt(r.sigma2_w) << ','
        << fmt(r.p_star) << ',' << fmt(r.percent_of_pmax) << '\n';
  }
}

void write_simulation_csv(std::ostream& out, double theoretical_phi,
                          const std::vector<ConvergenceRow>& rows) {
  out << "packet_count,mean_loss,std_error,theoretical_phi,relative_gap\n";
  for (const auto& r : rows) {
    out << r.packet_count << ',' << fmt(r.mean_loss) << ',' << fmt(r.std_error) << ','
        << fmt(theoretical_phi) << ',' << fmt(r.relative_gap) << '\n';
  }
}

}  // namespace eeq
