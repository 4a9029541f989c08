#include "eeq/efficiency.hpp"

#include <cmath>
#include <stdexcept>

namespace eeq {
namespace {

constexpr double kUnderflowFloor = 1e-300;
constexpr double kRelativeStep = 1e-6;

void check_power(double p, const char* where) {
  if (std::isnan(p) || !(p > 0.0)) {
    throw std::domain_error(std::string(where) + ": transmit power must be > 0");
  }
}

double loss_at(const QueueParams& queue, const SuccessModel& model, double p) {
  return packet_loss(queue, success_probability(model, p));
}

}  // namespace

void SystemParams::validate() const {
  auto fail = [](const char* msg) { throw std::invalid_argument(msg); };
  if (!(rate_R > 0.0)) fail("rate_R must be > 0");
  if (!(fixed_power_b >= 0.0)) fail("fixed_power_b must be >= 0");
  if (!(amp_coeff_a > 0.0)) fail("amp_coeff_a must be > 0");
  if (!(noise_sigma2 > 0.0)) fail("noise_sigma2 must be > 0");
  if (!(p_min > 0.0) || !(p_min < p_max)) fail("power bounds must satisfy 0 < p_min < p_max");
  if (!(loss_bound_epsilon > 0.0) || loss_bound_epsilon > 1.0) {
    fail("loss_bound_epsilon must lie in (0, 1]");
  }
}

EfficiencyPoint efficiency(const SystemParams& sys, const QueueParams& queue,
                           const SuccessModel& model, double p) {
  check_power(p, "efficiency");
  const double f = success_probability(model, p);
  const auto pi = stationary_distribution(queue, f);
  const double phi = (1.0 - f) * pi.probs.back();
  const bool feasible = phi <= sys.loss_bound_epsilon && p >= sys.p_min && p <= sys.p_max;

  double eta = 0.0;
  if (f >= kUnderflowFloor) {
    // 1 - phi without cancellation when phi is close to 1.
    double delivered = f * pi.probs.back();
    for (std::size_t s = 0; s + 1 < pi.probs.size(); ++s) delivered += pi.probs[s];
    const double goodput_share = queue.arrival_prob_q * delivered;
    eta = goodput_share * sys.rate_R /
          (sys.fixed_power_b + sys.amp_coeff_a * p * goodput_share / f);
  }
  return {p, eta, phi, f, feasible};
}

StationarityResidual stationarity_residual(const SystemParams& sys, const QueueParams& queue,
                                           const SuccessModel& model, double p) {
  check_power(p, "stationarity_residual");
  const double q = queue.arrival_prob_q;
  const double a = sys.amp_coeff_a;
  const double b = sys.fixed_power_b;

  const double h = kRelativeStep * p;
  const double dphi = (loss_at(queue, model, p + h) - loss_at(queue, model, p - h)) / (2.0 * h);

  const double f = success_probability(model, p);
  const double df = success_derivative(model, p);
  const double phi = packet_loss(queue, f);
  const double p_over_f = p / f;
  const double d_p_over_f = (f - p * df) / (f * f);

  const double denom = b + a * p * q * (1.0 - phi) / f;
  const double first = -dphi * denom;
  const double second = -a * q * (1.0 - phi) * ((1.0 - phi) * d_p_over_f - dphi * p_over_f);

  const double reduced = -dphi * (b + p * q * (1.0 - phi) / f) +
                         (1.0 - phi) * (dphi * p_over_f + d_p_over_f);
  // (p/f)' is measured against (p/f)/p = 1/f, since it vanishes at p*.
  const double scale = std::abs(dphi) * denom +
                       a * q * (1.0 - phi) * ((1.0 - phi) / f + std::abs(dphi) * p_over_f);
  return {first + second, scale, reduced};
}

double power_gain_db(double p_star_q1, double p_star) {
  if (!(p_star_q1 > 0.0) || !(p_star > 0.0)) {
    throw std::domain_error("power_gain_db: powers must be > 0");
  }
  return 10.0 * std::log10(p_star_q1 / p_star);
}

}  // namespace eeq
