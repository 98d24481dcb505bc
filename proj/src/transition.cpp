#include "isoextend/transition.hpp"

#include <limits>

#include "isoextend/errors.hpp"

namespace isoextend {

double required_radius_ratio(double angle, double epsilon, double slowness) {
  if (angle == 0.0) return 1.0;
  return std::exp(angle * kSmoothStepDerivativeBound / (slowness * epsilon));
}

TransitionProfile make_transition(double epsilon, double totalAngle, double r1, double r2, double slowness) {
  if (!(r1 > 0.0 && r1 < r2)) throw Error(ErrorKind::Precondition, "need 0 < r1 < r2");
  if (!(totalAngle >= 0.0)) throw Error(ErrorKind::Precondition, "total angle must be nonnegative");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorKind::Precondition, "epsilon must lie in (0, 1)");
  TransitionProfile profile;
  if (totalAngle == 0.0) return profile;
  const double slope = totalAngle * profile.derivativeBound / std::log(r2 / r1);
  if (slope > slowness * epsilon * (1.0 + 1e-12)) {
    const double ratio = required_radius_ratio(totalAngle, epsilon, slowness);
    throw Error(ErrorKind::Feasibility,
                "radius ratio " + std::to_string(r2 / r1) + " too small; need r2/r1 >= " + std::to_string(ratio),
                ratio);
  }
  return profile;
}

}  // namespace isoextend
