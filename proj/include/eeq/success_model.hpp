#pragma once

#include <variant>

namespace eeq {

/// Success probability for a link whose channel realization is unknown to
/// the transmitter: f(p) = exp(-(2^(R/R0) - 1) * sigma2 / p).
struct ExpUnknownChannel {
  double rate_R;
  double rate_R0;
  double noise_sigma2;

  ExpUnknownChannel(double rate_R, double rate_R0, double noise_sigma2);

  /// (2^(R/R0) - 1) * sigma2, the power at which f(p) = 1/e.
  double threshold() const;
};

/// Success probability for a known channel with gain hh*:
/// f(p) = Q(kappa * R/R0 - kappa * ln(1 + hh* p / sigma2)).
struct QKnownChannel {
  double rate_R;
  double rate_R0;
  double spread_kappa;
  double channel_gain_hh;
  double noise_sigma2;

  QKnownChannel(double rate_R, double rate_R0, double spread_kappa,
                double channel_gain_hh, double noise_sigma2);
};

using SuccessModel = std::variant<ExpUnknownChannel, QKnownChannel>;

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
double gaussian_tail(double x);

/// f(p), clamped to [0, 1]. Throws std::domain_error for p < 0.
double success_probability(const SuccessModel& model, double p);

/// df/dp. Throws std::domain_error for p <= 0.
double success_derivative(const SuccessModel& model, double p);

}  // namespace eeq
