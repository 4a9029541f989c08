#include "eeq/success_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace eeq {
namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
  }
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

// Argument of Q(.) for the known-channel model.
double q_argument(const QKnownChannel& m, double p) {
  return m.spread_kappa * m.rate_R / m.rate_R0 -
         m.spread_kappa * std::log1p(m.channel_gain_hh * p / m.noise_sigma2);
}

}  // namespace

ExpUnknownChannel::ExpUnknownChannel(double rate_R, double rate_R0, double noise_sigma2)
    : rate_R(rate_R), rate_R0(rate_R0), noise_sigma2(noise_sigma2) {
  require_positive(rate_R, "rate_R");
  require_positive(rate_R0, "rate_R0");
  require_positive(noise_sigma2, "noise_sigma2");
}

double ExpUnknownChannel::threshold() const {
  return std::expm1(std::log(2.0) * rate_R / rate_R0) * noise_sigma2;
}

QKnownChannel::QKnownChannel(double rate_R, double rate_R0, double spread_kappa,
                             double channel_gain_hh, double noise_sigma2)
    : rate_R(rate_R),
      rate_R0(rate_R0),
      spread_kappa(spread_kappa),
      channel_gain_hh(channel_gain_hh),
      noise_sigma2(noise_sigma2) {
  require_positive(rate_R, "rate_R");
  require_positive(rate_R0, "rate_R0");
  require_positive(spread_kappa, "spread_kappa");
  require_positive(channel_gain_hh, "channel_gain_hh");
  require_positive(noise_sigma2, "noise_sigma2");
}

double gaussian_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double success_probability(const SuccessModel& model, double p) {
  if (std::isnan(p) || p < 0.0) {
    throw std::domain_error("success_probability: transmit power must be >= 0");
  }
  return std::visit(
      [p](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, ExpUnknownChannel>) {
          if (p == 0.0) return 0.0;
          return clamp_unit(std::exp(-m.threshold() / p));
        } else {
          return clamp_unit(gaussian_tail(q_argument(m, p)));
        }
      },
      model);
}

double success_derivative(const SuccessModel& model, double p) {
  if (std::isnan(p) || !(p > 0.0)) {
    throw std::domain_error("success_derivative: transmit power must be > 0");
  }
  return std::visit(
      [p](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, ExpUnknownChannel>) {
          const double c = m.threshold();
          if (std::isinf(p)) return 0.0;
          return std::exp(-c / p) * c / (p * p);
        } else {
          // Chain rule through Q'(x) = -phi(x) and d/dp ln(1 + g p / s2).
          const double x = q_argument(m, p);
          const double density = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
          const double dx_dp = -m.spread_kappa * m.channel_gain_hh /
                               (m.noise_sigma2 + m.channel_gain_hh * p);
          return -density * dx_dp;
        }
      },
      model);
}

}  // namespace eeq
