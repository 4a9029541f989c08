#include "eeq/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace eeq {
namespace {

constexpr int kMaxDoublings = 60;
constexpr double kRelativeWidth = 1e-9;
constexpr double kGridPointsPerDecade = 8.0;
constexpr int kMinGridPoints = 33;

std::vector<double> log_grid(double lo, double hi) {
  const double decades = std::log10(hi / lo);
  const int n = std::max(kMinGridPoints, static_cast<int>(std::ceil(decades * kGridPointsPerDecade)) + 1);
  std::vector<double> grid(n);
  const double llo = std::log(lo);
  const double step = (std::log(hi) - llo) / (n - 1);
  for (int i = 0; i < n; ++i) grid[i] = std::exp(llo + step * i);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

double start_lo(const SystemParams& sys) { return sys.noise_sigma2 * 1e-3; }
double start_hi(const SystemParams& sys) { return sys.p_max * 1e3; }

}  // namespace

std::string_view to_string(Binding binding) {
  switch (binding) {
    case Binding::interior: return "interior";
    case Binding::qos_bound: return "qos_bound";
    case Binding::power_cap: return "power_cap";
    case Binding::power_floor: return "power_floor";
    case Binding::infeasible: return "infeasible";
  }
  return "unknown";
}

ScalarMaximum maximize_quasiconcave(const std::function<double(double)>& fn, double lo, double hi) {
  if (!(lo > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("maximize_quasiconcave: need 0 < lo < hi");
  }

  std::vector<double> grid;
  std::vector<double> values;
  std::size_t best = 0;
  for (int doublings = 0;;) {
    grid = log_grid(lo, hi);
    values.resize(grid.size());
    std::transform(grid.begin(), grid.end(), values.begin(), fn);
    best = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());

    const bool at_lo = best == 0;
    const bool at_hi = best + 1 == grid.size();
    const bool flat = values[best] <= 0.0;
    if (!at_lo && !at_hi && !flat) break;
    if (doublings >= kMaxDoublings) {
      throw NoInteriorMaximum("no interior maximum found after bracket expansion");
    }
    if (at_lo || flat) lo /= 2.0;
    if (at_hi || flat) hi *= 2.0;
    ++doublings;
  }

  const std::pair<double, double> bracket{grid[best - 1], grid[best + 1]};
  double best_arg = grid[best];
  double best_value = values[best];
  auto consider = [&](double x, double v) {
    if (v > best_value || (v == best_value && x < best_arg)) {
      best_arg = x;
      best_value = v;
    }
  };

  // Golden-section on u = log(p).
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(bracket.first);
  double b = std::log(bracket.second);
  double u1 = b - ratio * (b - a);
  double u2 = a + ratio * (b - a);
  double v1 = fn(std::exp(u1));
  double v2 = fn(std::exp(u2));
  consider(std::exp(u1), v1);
  consider(std::exp(u2), v2);

  int iterations = 0;
  while (b - a > kRelativeWidth) {
    if (v1 >= v2) {
      b = u2;
      u2 = u1;
      v2 = v1;
      u1 = b - ratio * (b - a);
      v1 = fn(std::exp(u1));
      consider(std::exp(u1), v1);
    } else {
      a = u1;
      u1 = u2;
      v1 = v2;
      u2 = a + ratio * (b - a);
      v2 = fn(std::exp(u2));
      consider(std::exp(u2), v2);
    }
    ++iterations;
  }
  return {best_arg, best_value, iterations, bracket};
}

double power_search_floor(const SystemParams& sys) {
  return std::min(sys.p_min, sys.noise_sigma2 * 1e-3);
}

Optimum maximize_unconstrained(const SystemParams& sys, const QueueParams& queue,
                               const SuccessModel& model) {
  sys.validate();
  auto eta = [&](double p) { return efficiency(sys, queue, model, p).eta; };
  const auto found = maximize_quasiconcave(eta, start_lo(sys), start_hi(sys));

  Optimum out;
  out.p_star = found.arg;
  out.eta_star = found.value;
  out.iterations = found.iterations;
  out.bracket = found.bracket;
  return out;
}

std::optional<double> qos_threshold_p0(const SystemParams& sys, const QueueParams& queue,
                                       const SuccessModel& model) {
  sys.validate();
  auto satisfied = [&](double p) {
    return packet_loss(queue, success_probability(model, p)) <= sys.loss_bound_epsilon;
  };
  double lo = power_search_floor(sys);
  double hi = sys.p_max;
  if (!satisfied(hi)) return std::nullopt;
  if (satisfied(lo)) return lo;

  // Invariant: phi(lo) > epsilon >= phi(hi).
  while (std::log(hi / lo) > kRelativeWidth) {
    const double mid = std::sqrt(lo * hi);
    if (satisfied(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

Optimum maximize_constrained(const SystemParams& sys, const QueueParams& queue,
                             const SuccessModel& model) {
  Optimum out = maximize_unconstrained(sys, queue, model);
  out.p0 = qos_threshold_p0(sys, queue, model);
  if (!out.p0) {
    out.binding = Binding::infeasible;
    return out;
  }

  double p = out.p_star;
  out.binding = Binding::interior;
  if (*out.p0 > p) {
    p = *out.p0;
    out.binding = Binding::qos_bound;
  }
  if (p > sys.p_max) {
    p = sys.p_max;
    out.binding = Binding::power_cap;
  } else if (p < sys.p_min) {
    p = sys.p_min;
    out.binding = Binding::power_floor;
  }
  out.p_star_constrained = p;
  out.eta_star_constrained = efficiency(sys, queue, model, p).eta;
  return out;
}

double limit_optimizer(const SystemParams& sys, const SuccessModel& model, LimitCase which) {
  sys.validate();
  const double b = which == LimitCase::q_to_1 ? sys.fixed_power_b : 0.0;
  auto ratio = [&](double p) { return success_probability(model, p) / (b + sys.amp_coeff_a * p); };
  return maximize_quasiconcave(ratio, start_lo(sys), start_hi(sys)).arg;
}

}  // namespace eeq
