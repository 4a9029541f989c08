#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "eeq/experiment.hpp"
#include "eeq/units.hpp"
#include "test_support.hpp"

using namespace eeq;
using eeq::testing::rel_err;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST_CASE("dBm round trip") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dbm(-120.0, 60.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = dbm(rng);
    CHECK(rel_err(watts_to_dbm(dbm_to_watts(x)), x) <= 1e-12);
    const double w = dbm_to_watts(x);
    CHECK(rel_err(dbm_to_watts(watts_to_dbm(w)), w) <= 1e-12);
  }
  CHECK(dbm_to_watts(30.0) == 1.0);
  CHECK(dbm_to_watts(35.0) == doctest::Approx(3.1622776601683795));
  CHECK(db_to_ratio(20.0) == doctest::Approx(100.0));
  CHECK(ratio_to_db(1000.0) == doctest::Approx(30.0));
}

TEST_CASE("defaults") {
  const ExperimentConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.queue.buffer_size_K == 10);
  CHECK(cfg.system.rate_R == 4000.0);
  CHECK(cfg.rate_R0 == 1000.0);
  CHECK(watts_to_dbm(cfg.system.p_max) == doctest::Approx(35.0));
  CHECK(cfg.system.fixed_power_b / cfg.system.noise_sigma2 == doctest::Approx(100.0));
}

TEST_CASE("config file sections and units") {
  const auto cfg = parse(R"(
; comment
[system]
R = 8000
sigma2 = -10
b_over_sigma2 = 10
p_max_w = 2.5
p_min = 0
epsilon = 0.05

[queue]
q = 0.25
K = 4

[model]
type = qfunc
R0 = 2000
kappa = 1.5
hh = 0.5

[sweep]
axis = q
start = 0.1
stop = 0.9
num = 5
p_start_w = 0.01
p_stop_w = 10
p_points = 50

[sim]
f = 0.7
packets = 500
runs = 20
seed = 9
packet_counts = 100, 1000
)");
  CHECK(cfg.system.rate_R == 8000.0);
  CHECK(cfg.system.noise_sigma2 == doctest::Approx(1e-4));
  CHECK(cfg.system.fixed_power_b == doctest::Approx(1e-3));
  CHECK(cfg.system.p_max == 2.5);
  CHECK(cfg.system.p_min == doctest::Approx(1e-3));
  CHECK(cfg.system.loss_bound_epsilon == 0.05);
  CHECK(cfg.queue.arrival_prob_q == 0.25);
  CHECK(cfg.queue.buffer_size_K == 4);
  CHECK(cfg.model_kind == ModelKind::qfunc);
  CHECK(*cfg.spread_kappa == 1.5);
  CHECK(cfg.channel_gain_hh == 0.5);
  REQUIRE(cfg.axis.has_value());
  CHECK(cfg.axis->name == "q");
  REQUIRE(cfg.axis->values.size() == 5);
  CHECK(cfg.axis->values[2] == doctest::Approx(0.5));
  CHECK(cfg.power_grid.points == 50);
  CHECK(*cfg.sim.success_prob_f == 0.7);
  CHECK(cfg.sim.packet_counts == std::vector<std::uint64_t>{100, 1000});
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("log-spaced axis and explicit values") {
  auto cfg = parse("[sweep]\naxis = b_over_sigma2\nstart = 1\nstop = 1000\nnum = 4\nspacing = log\n");
  CHECK(cfg.axis->values[1] == doctest::Approx(10.0));
  cfg = parse("[sweep]\naxis = epsilon\nvalues = 0.01, 0.1, 1\n");
  CHECK(cfg.axis->values == std::vector<double>{0.01, 0.1, 1.0});
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse("[bogus]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[system]\nb = 10\nb_w = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[system]\nb = 10\nb_over_sigma2 = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse("[system]\nR = fast\n"), ConfigError);
  CHECK_THROWS_AS(parse("[queue]\nq = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("[queue]\nK = 2.5\n"), ConfigError);
  CHECK_THROWS_AS(parse("[model]\ntype = rayleigh\n"), ConfigError);
  CHECK_THROWS_AS(parse("[sweep]\naxis = q\n"), ConfigError);
  CHECK_THROWS_AS(parse("[sweep]\naxis = q\nvalues = 0.5, 0.1\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse("[sweep]\naxis = R\nvalues = 1\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse("[model]\ntype = qfunc\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse("[system]\np_min_w = 10\np_max_w = 1\n").validate(), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/eeq.ini"), ConfigError);
}

TEST_CASE("axis overrides") {
  const ExperimentConfig base;
  CHECK(with_axis_value(base, "q", 0.3).queue.arrival_prob_q == 0.3);
  CHECK(with_axis_value(base, "K", 25).queue.buffer_size_K == 25);
  CHECK(with_axis_value(base, "epsilon", 0.1).system.loss_bound_epsilon == 0.1);
  const auto ratio = with_axis_value(base, "b_over_sigma2", 7.0);
  CHECK(ratio.system.fixed_power_b == doctest::Approx(7.0 * base.system.noise_sigma2));
  CHECK_THROWS_AS(with_axis_value(base, "K", 2.5), ConfigError);
  CHECK_THROWS_AS(with_axis_value(base, "q", 2.0), ConfigError);
}

TEST_CASE("sweep rows, ordering and CSV") {
  ExperimentConfig cfg;
  cfg.axis = SweepAxis{"q", {0.2, 0.6}};
  cfg.power_grid = {1e-3, 1.0, 7};
  const auto rows = run_sweep(cfg);
  REQUIRE(rows.size() == 14);
  CHECK(rows[0].axis_value == 0.2);
  CHECK(rows[7].axis_value == 0.6);
  CHECK(rows[6].point.power_p == doctest::Approx(1.0));

  std::ostringstream a;
  std::ostringstream b;
  write_sweep_csv(a, rows);
  write_sweep_csv(b, run_sweep(cfg));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("axis_value,p,eta,phi,f,feasible\n", 0) == 0);

  cfg.axis.reset();
  const auto plain = run_sweep(cfg);
  REQUIRE(plain.size() == 7);
  CHECK(plain[3].axis_value == plain[3].point.power_p);
}

TEST_CASE("optimize and gain tables") {
  ExperimentConfig cfg;
  cfg.axis = SweepAxis{"q", {0.1, 0.5, 1.0}};
  const auto opt = run_optimize(cfg);
  REQUIRE(opt.size() == 3);
  CHECK(opt[0].optimum.p_star <= opt[1].optimum.p_star);
  CHECK(opt[1].optimum.p_star <= opt[2].optimum.p_star);
  std::ostringstream csv;
  write_optimize_csv(csv, opt);
  CHECK(csv.str().rfind("q,K,b,sigma2,epsilon,p_star,p0,p_star_constrained,eta_star,binding\n", 0) == 0);
  CHECK(csv.str().find(",interior\n") != std::string::npos);

  const auto gain = run_gain(cfg);
  REQUIRE(gain.size() == 3);
  CHECK(*gain[2].gain_db == 0.0);
  CHECK(*gain[0].gain_db >= *gain[1].gain_db);
  std::ostringstream gcsv;
  write_gain_csv(gcsv, gain);
  CHECK(gcsv.str().rfind("axis_value,p_star_q1,p_star,gain_db\n", 0) == 0);

  cfg.system.loss_bound_epsilon = 1e-9;
  cfg.system.p_max = 0.05;
  const auto infeasible = run_optimize(cfg);
  CHECK(infeasible[0].optimum.binding == Binding::qos_bound);  // phi ~ 1e-14 at q = 0.1
  CHECK(infeasible[2].optimum.binding == Binding::infeasible);  // phi = 1 - f at q = 1
  std::ostringstream icsv;
  write_optimize_csv(icsv, infeasible);
  CHECK(icsv.str().find("infeasible,infeasible") != std::string::npos);
}

TEST_CASE("useful cases") {
  const auto rows = run_useful_cases(ExperimentConfig{});
  REQUIRE(rows.size() == 4);
  // q -> 0 optimum is the threshold 15 sigma2: 15% of p_max at 20 dB.
  CHECK(rows[2].q == doctest::Approx(0.04));
  CHECK(rows[2].snr_db == 20.0);
  CHECK(rows[2].percent_of_pmax == doctest::Approx(15.0).epsilon(0.05));
  std::ostringstream csv;
  write_useful_cases_csv(csv, rows);
  CHECK(csv.str().rfind("# assumption:", 0) == 0);
}
