#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>

#include "eeq/efficiency.hpp"

namespace eeq {

/// Thrown when bracket expansion never isolates an interior maximum,
/// i.e. the objective is not quasi-concave in the usual sigmoidal way.
class NoInteriorMaximum : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Binding {
  interior,     // p** = p*
  qos_bound,    // p** = p0 > p*
  power_cap,    // p** = p_max
  power_floor,  // p** = p_min (both p0 and p* lie below the floor)
  infeasible,   // phi(p_max) > epsilon
};

std::string_view to_string(Binding binding);

struct Optimum {
  double p_star = 0.0;
  double eta_star = 0.0;
  std::optional<double> p0;
  std::optional<double> p_star_constrained;
  std::optional<double> eta_star_constrained;
  Binding binding = Binding::interior;
  int iterations = 0;
  std::pair<double, double> bracket{0.0, 0.0};  // contains p_star; eta_star >= eta at both ends
};

/// Result of the one-dimensional engine.
struct ScalarMaximum {
  double arg;
  double value;
  int iterations;
  std::pair<double, double> bracket;
};

/// Maximizes a quasi-concave fn over p > 0 by golden-section search in log(p).
///
/// [lo, hi] is scanned on a log grid and widened by factors of two (at most 60
/// times) until the best grid point is interior; its two neighbours form the
/// bracket. Search stops at relative bracket width 1e-9. Ties go to the
/// smaller power.
ScalarMaximum maximize_quasiconcave(const std::function<double(double)>& fn, double lo, double hi);

/// Lower end of the power range searched for p0: min(p_min, 1e-3 sigma2).
double power_search_floor(const SystemParams& sys);

/// p* = argmax eta(p), ignoring the QoS and power-range constraints.
Optimum maximize_unconstrained(const SystemParams& sys, const QueueParams& queue,
                               const SuccessModel& model);

/// p0 = min{p : phi(p) <= epsilon}, by bisection in log(p) to relative 1e-9.
/// Returns the search floor when the constraint holds everywhere and nullopt
/// when phi(p_max) > epsilon.
std::optional<double> qos_threshold_p0(const SystemParams& sys, const QueueParams& queue,
                                       const SuccessModel& model);

/// p** = min(max(p0, p*), p_max), raised to p_min if it falls below.
Optimum maximize_constrained(const SystemParams& sys, const QueueParams& queue,
                             const SuccessModel& model);

enum class LimitCase { q_to_0, q_to_1 };

/// q -> 0 maximizes f(p)/(a p); q -> 1 maximizes f(p)/(b + a p).
double limit_optimizer(const SystemParams& sys, const SuccessModel& model, LimitCase which);

}  // namespace eeq
