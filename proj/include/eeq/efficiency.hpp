#pragma once

#include "eeq/queue_model.hpp"
#include "eeq/success_model.hpp"

namespace eeq {

/// Physical-layer and device parameters. Powers are in watts, R in bits/s.
struct SystemParams {
  double rate_R;
  double fixed_power_b;
  double amp_coeff_a;
  double noise_sigma2;
  double p_min;
  double p_max;
  double loss_bound_epsilon;

  /// Throws std::invalid_argument if any invariant is violated.
  void validate() const;
};

struct EfficiencyPoint {
  double power_p;
  double eta;  // bits per joule
  double phi;
  double f;
  bool feasible;  // phi <= epsilon and p_min <= p <= p_max
};

/// Energy efficiency eta(p) = q(1 - phi) R / (b + a p q (1 - phi) / f).
///
/// The numerator is the goodput and the denominator the mean device power
/// (fixed consumption plus radiated power over the 1/f transmission attempts
/// per delivered packet). eta is 0 when f(p) underflows below 1e-300.
/// Throws std::domain_error for p <= 0.
EfficiencyPoint efficiency(const SystemParams& sys, const QueueParams& queue,
                           const SuccessModel& model, double p);

/// Signed first-order condition for a stationary point of eta.
struct StationarityResidual {
  /// -phi' D - a q (1 - phi) [(1 - phi) (p/f)' - phi' p/f], where D is the
  /// denominator of eta. Has the sign of d(eta)/dp and vanishes at p*.
  double value;
  /// Magnitude of the terms of value with (p/f)' replaced by (p/f)/p, so it
  /// stays meaningful where both terms vanish together (small q).
  double scale;
  /// -phi' {b + p q (1 - phi)/f} + (1 - phi) {phi' p/f + (p/f)'}: an
  /// abbreviated form that drops the q and (1 - phi) weights on the radiated
  /// power term. Agrees with value (up to sign and scale) only at q = 1.
  double reduced_form;
};

/// dphi/dp is taken by central differences on packet_loss(f(p)) with
/// relative step 1e-6. Throws std::domain_error for p <= 0.
StationarityResidual stationarity_residual(const SystemParams& sys, const QueueParams& queue,
                                           const SuccessModel& model, double p);

/// 10 log10(p_star_q1 / p_star). Throws std::domain_error on nonpositive input.
double power_gain_db(double p_star_q1, double p_star);

}  // namespace eeq
