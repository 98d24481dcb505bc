#pragma once

#include <cmath>
#include <string>

namespace isoextend {

// Smooth step s: s(u) = 1 for u <= 0, 0 for u >= 1, C-infinity and monotone
// in between. s(u) = phi(1-u) / (phi(1-u) + phi(u)), phi(t) = exp(-1/t).
template <typename T>
T smooth_step(T u) {
  if (u <= T(0)) return T(1);
  if (u >= T(1)) return T(0);
  const T a = T(1) / (T(1) - u) - T(1) / u;
  return T(1) / (T(1) + std::exp(a));
}

template <typename T>
T smooth_step_derivative(T u) {
  if (u <= T(0) || u >= T(1)) return T(0);
  const T a = T(1) / (T(1) - u) - T(1) / u;
  const T e = std::exp(-std::abs(a));
  const T w = e / ((T(1) + e) * (T(1) + e));  // s (1 - s)
  if (w == T(0)) return T(0);
  return -w * (T(1) / ((T(1) - u) * (T(1) - u)) + T(1) / (u * u));
}

// Declared sup|s'|; the true supremum is 2 (attained at u = 1/2).
inline constexpr double kSmoothStepDerivativeBound = 2.3;

// Default constant c in the slowness condition t|f'(t)| <= c * epsilon.
inline constexpr double kSlownessConstant = 0.1;

struct TransitionProfile {
  std::string kind = "exp-bump-quotient";
  double derivativeBound = kSmoothStepDerivativeBound;
};

// Minimal outer/inner radius ratio for a log-radius schedule of total angle
// `angle` to satisfy angle * S_max / ln(r2/r1) <= c * epsilon. May be +inf.
double required_radius_ratio(double angle, double epsilon, double slowness = kSlownessConstant);

// Returns the profile when the schedule on [r1, r2] is slow enough, otherwise
// throws a Feasibility error whose value is the required ratio r2/r1.
TransitionProfile make_transition(double epsilon, double totalAngle, double r1, double r2,
                                  double slowness = kSlownessConstant);

}  // namespace isoextend
