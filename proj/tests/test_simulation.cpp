#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "eeq/simulation.hpp"
#include "test_support.hpp"

using namespace eeq;

namespace {

SimConfig config(double q, double f, int K, std::uint64_t packets, std::uint64_t runs,
                 std::uint64_t seed = 7) {
  return SimConfig{QueueParams(q, K), f, packets, runs, seed};
}

}  // namespace

TEST_CASE("config validation") {
  auto cfg = config(0.5, 0.5, 4, 10, 1);
  cfg.total_packets = 0;
  CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
  cfg = config(0.5, 0.5, 4, 10, 0);
  CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
  cfg = config(0.5, 1.5, 4, 10, 1);
  CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
  cfg = config(0.5, 0.5, 4, 10, 1);
  cfg.initial_queue_state = 5;
  CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
  CHECK_THROWS_AS(convergence_study(config(0.5, 0.5, 4, 10, 1), {}), std::invalid_argument);
}

TEST_CASE("perfect channel never loses") {
  auto cfg = config(0.9, 1.0, 2, 5000, 20);
  cfg.keep_per_run_losses = true;
  const auto report = simulate(cfg);
  CHECK(report.mean_loss_fraction == 0.0);
  CHECK(report.theoretical_phi == 0.0);
  CHECK(report.relative_gap == 0.0);
  REQUIRE(report.per_run_losses.has_value());
  for (double loss : *report.per_run_losses) CHECK(loss == 0.0);
}

TEST_CASE("dead channel loses everything past the buffer") {
  const auto report = simulate(config(0.4, 0.0, 10, 10000, 4));
  CHECK(report.mean_loss_fraction == doctest::Approx((10000.0 - 10.0) / 10000.0));
  CHECK(report.theoretical_phi == 1.0);
}

TEST_CASE("reproducible for a fixed seed") {
  auto cfg = config(0.5, 0.6, 5, 2000, 50, 12345);
  cfg.keep_per_run_losses = true;
  const auto a = simulate(cfg);
  const auto b = simulate(cfg);
  CHECK(a.mean_loss_fraction == b.mean_loss_fraction);
  CHECK(a.std_error == b.std_error);
  CHECK(*a.per_run_losses == *b.per_run_losses);
  cfg.seed = 12346;
  CHECK(simulate(cfg).mean_loss_fraction != a.mean_loss_fraction);
}

TEST_CASE("pairwise summation") {
  std::vector<double> v(1001, 0.1);
  CHECK(pairwise_sum(v.data(), v.size()) == doctest::Approx(100.1).epsilon(1e-14));
  CHECK(pairwise_sum(v.data(), 0) == 0.0);
}

TEST_CASE("long runs agree with the closed-form loss within 3 standard errors") {
  for (double q : {0.3, 0.5, 0.8}) {
    for (double f : {0.3, 0.6, 0.9}) {
      for (int K : {2, 10}) {
        auto cfg = config(q, f, K, 100000, 100, 2024);
        cfg.warmup_slots = 1000;
        const auto report = simulate(cfg);
        INFO("q=" << q << " f=" << f << " K=" << K << " sim=" << report.mean_loss_fraction
                  << " phi=" << report.theoretical_phi << " se=" << report.std_error);
        // With losses too rare to observe, the sample spread is zero; fall back
        // on the binomial standard error of the pooled arrivals.
        const double phi = report.theoretical_phi;
        const double se = std::max(report.std_error, std::sqrt(phi * (1.0 - phi) / (100000.0 * 100.0)));
        CHECK(std::abs(report.mean_loss_fraction - phi) <= 3.0 * se);
      }
    }
  }
}

TEST_CASE("occupancy histogram matches the stationary distribution") {
  const QueueParams queue(0.45, 6);
  const double f = 0.5;
  const auto expected = stationary_distribution(queue, f).probs;
  const int replicas = 30;
  std::vector<std::vector<double>> hists;
  for (int r = 0; r < replicas; ++r) {
    SimConfig cfg{queue, f, 20000, 1, 900 + static_cast<std::uint64_t>(r)};
    cfg.track_occupancy = true;
    cfg.warmup_slots = 500;
    hists.push_back(*simulate(cfg).occupancy);
  }
  for (std::size_t s = 0; s < expected.size(); ++s) {
    double mean = 0.0;
    for (const auto& h : hists) mean += h[s];
    mean /= replicas;
    double var = 0.0;
    for (const auto& h : hists) var += (h[s] - mean) * (h[s] - mean);
    const double se = std::sqrt(var / (replicas - 1) / replicas);
    INFO("state " << s << " sim=" << mean << " closed=" << expected[s] << " se=" << se);
    CHECK(std::abs(mean - expected[s]) <= 3.0 * se);
  }
}

TEST_CASE("short runs match the exact transient expectation") {
  // Starting empty biases the loss fraction low; the dynamic program gives
  // the exact expected value for these run lengths.
  for (int packets : {200, 1000}) {
    const auto report = simulate(config(0.5, 0.5, 10, packets, 20000, 31));
    const double exact = eeq::testing::exact_transient_loss(0.5, 0.5, 10, packets);
    INFO("packets=" << packets << " sim=" << report.mean_loss_fraction << " exact=" << exact);
    CHECK(std::abs(report.mean_loss_fraction - exact) <= 3.0 * report.std_error);
  }
  CHECK(eeq::testing::exact_transient_loss(0.5, 0.5, 10, 1000) ==
        doctest::Approx(0.5 / 11.0 * (1.0 - 0.045)).epsilon(1e-9));
}

TEST_CASE("convergence study") {
  auto cfg = config(0.5, 0.5, 10, 1000, 4000, 99);
  const auto rows = convergence_study(cfg, {50, 200, 1000, 5000});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].packet_count == 50);
  // Starting empty, the early loss fraction is biased low and the gap closes.
  CHECK(rows[0].relative_gap > rows[2].relative_gap);
  CHECK(rows[1].relative_gap > rows[3].relative_gap);
  CHECK(rows[3].relative_gap < 0.04);

  SUBCASE("initial state does not matter in the long run") {
    auto full = config(0.5, 0.5, 10, 20000, 400, 5);
    full.initial_queue_state = 10;
    auto empty = full;
    empty.initial_queue_state = 0;
    const auto a = simulate(full);
    const auto b = simulate(empty);
    CHECK(a.mean_loss_fraction > b.mean_loss_fraction);
    CHECK(std::abs(a.mean_loss_fraction - b.mean_loss_fraction) <= 0.03 * a.theoretical_phi);
    CHECK(a.relative_gap < 0.03);
    CHECK(b.relative_gap < 0.03);
  }
}
