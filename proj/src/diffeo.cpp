#include "isoextend/diffeo.hpp"

#include <cmath>
#include <random>

#include "isoextend/errors.hpp"

namespace isoextend {

namespace {

constexpr double kNetTolerance = 1e-12;
constexpr int kNetDirections = 64;

Vec center_or_origin(const std::optional<Vec>& center, int dimension) {
  return center ? *center : Vec::Zero(dimension);
}

bool is_identity_motion(const EuclideanMotion& m) {
  const int d = m.dimension();
  return (m.linear() - Mat::Identity(d, d)).norm() == 0.0 && m.translation().norm() == 0.0;
}

double tolerance_at(const Vec& x) { return kNetTolerance * std::max(1.0, x.norm()); }

}  // namespace

double shear_budget(double g) {
  // Singular values of a unit shear: sqrt(1 + g^2/4) +- g/2; sigma_max^2 - 1
  // equals 1/sigma_min^2 - 1.
  const double smax = std::sqrt(1.0 + 0.25 * g * g) + 0.5 * g;
  return smax * smax - 1.0;
}

double rank_one_budget(double g) {
  if (g >= 1.0) return std::numeric_limits<double>::infinity();
  return std::max((1.0 + g) * (1.0 + g) - 1.0, 1.0 / ((1.0 - g) * (1.0 - g)) - 1.0);
}

std::vector<Vec> sphere_directions(int dimension, int count) {
  std::vector<Vec> dirs;
  for (int i = 0; i < dimension && static_cast<int>(dirs.size()) < count; ++i) {
    dirs.push_back(Vec::Unit(dimension, i));
    dirs.push_back(-Vec::Unit(dimension, i));
  }
  std::mt19937_64 rng(0x5eedu);
  std::normal_distribution<double> normal;
  while (static_cast<int>(dirs.size()) < count) {
    Vec v(dimension);
    for (int i = 0; i < dimension; ++i) v[i] = normal(rng);
    dirs.push_back(v.normalized());
  }
  return dirs;
}

SmoothMap identity_map(int dimension) { return nodes::identity(dimension); }

SmoothMap motion_map(const EuclideanMotion& motion) {
  if (is_identity_motion(motion)) return nodes::identity(motion.dimension());
  return nodes::motion(motion);
}

SmoothMap make_slow_twist(const RotationFactorization& rotation, double r1, double r2, double epsilon,
                          const std::optional<Vec>& center, double slowness) {
  const int d = rotation.dimension();
  const double angle = rotation.max_abs_angle();
  TransitionProfile profile = make_transition(epsilon, angle, r1, r2, slowness);
  if (angle == 0.0) return nodes::identity(d);
  const double slope = angle * profile.derivativeBound / std::log(r2 / r1);
  SlowTwistNode node{center_or_origin(center, d), r1, r2, rotation, profile};
  return nodes::slow_twist(std::move(node), shear_budget(slope));
}

SmoothMap make_slide(const EuclideanMotion& motion, double r1, double r2, double epsilon,
                     const std::optional<Vec>& center, double slowness) {
  const int d = motion.dimension();
  if (!motion.proper()) throw Error(ErrorKind::Properness, "slides need a proper motion");
  if (!(r1 > 0.0 && r1 < r2)) throw Error(ErrorKind::Precondition, "need 0 < r1 < r2");
  if (is_identity_motion(motion)) return nodes::identity(d);

  const Vec c = center_or_origin(center, d);
  const double mid = std::sqrt(r1 * r2);
  // Motion about c: x -> c + Q (x - c) + offset.
  const Vec offset = motion(c) - c;
  const double bound = slowness * epsilon * r1;
  if (offset.norm() > bound) {
    throw Error(ErrorKind::Budget,
                "translation " + std::to_string(offset.norm()) + " exceeds admissible " + std::to_string(bound),
                bound);
  }
  const double width = r2 - mid;
  const double gradient = kSmoothStepDerivativeBound * offset.norm() / width;
  if (gradient > slowness * epsilon) {
    throw Error(ErrorKind::Budget, "translation blend too steep for the radii",
                slowness * epsilon * width / kSmoothStepDerivativeBound);
  }

  std::vector<SmoothMap> stages;
  stages.push_back(make_slow_twist(factor_rotation(motion.linear()), r1, mid, epsilon, c, slowness));
  if (offset.norm() > 0.0) {
    stages.push_back(nodes::slide(SlideNode{c, offset, mid, r2, TransitionProfile{}}, rank_one_budget(gradient)));
  }
  return compose(d, stages);
}

SmoothMap make_point_mover(const Vec& x, const Vec& xPrime, double r1, double r2, double epsilon,
                           const std::optional<Vec>& center, double slowness) {
  const int d = static_cast<int>(x.size());
  if (!(r1 > 0.0 && r1 < r2)) throw Error(ErrorKind::Precondition, "need 0 < r1 < r2");
  const Vec c = center_or_origin(center, d);
  if ((x - c).norm() > r1) throw Error(ErrorKind::Precondition, "moved point must lie inside the inner radius");
  const Vec shift = xPrime - x;
  if (shift.norm() == 0.0) return nodes::identity(d);
  const double bound = slowness * epsilon * r1;
  if (shift.norm() > bound) {
    throw Error(ErrorKind::Budget,
                "displacement " + std::to_string(shift.norm()) + " exceeds admissible " + std::to_string(bound),
                bound);
  }
  const double gradient = kSmoothStepDerivativeBound * shift.norm() / (r2 - r1);
  if (gradient > slowness * epsilon) {
    throw Error(ErrorKind::Budget, "mover blend too steep for the radii",
                slowness * epsilon * (r2 - r1) / kSmoothStepDerivativeBound);
  }
  return nodes::slide(SlideNode{c, shift, r1, r2, TransitionProfile{}}, rank_one_budget(gradient));
}

SmoothMap ball_patch(int dimension, std::vector<PatchBall> entries) {
  if (entries.empty()) return nodes::identity(dimension);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      const double gap = (entries[i].center - entries[j].center).norm() - entries[i].radius - entries[j].radius;
      if (!(gap > 0.0)) {
        throw Error(ErrorKind::Disjointness,
                    "balls " + std::to_string(i) + " and " + std::to_string(j) + " have overlapping closures", gap);
      }
    }
  }
  const auto dirs = sphere_directions(dimension, kNetDirections);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.map.support_radius(e.center) > e.radius * (1.0 + 1e-12)) {
      throw Error(ErrorKind::Support, "submap " + std::to_string(i) + " is not supported in its ball",
                  e.map.support_radius(e.center));
    }
    for (const auto& u : dirs) {
      const Vec x = e.center + e.radius * u;
      const double residual = (e.map.eval(x) - x).norm();
      if (residual > tolerance_at(x)) {
        throw Error(ErrorKind::Support, "submap " + std::to_string(i) + " moves its boundary sphere", residual);
      }
    }
  }
  return nodes::ball_patch(dimension, std::move(entries));
}

SmoothMap radial_glue(const Vec& center, double rInner, double rOuter, const SmoothMap& inner,
                      const SmoothMap& outer) {
  if (!(rInner > 0.0 && rInner < rOuter)) throw Error(ErrorKind::Precondition, "need 0 < rInner < rOuter");
  const int d = static_cast<int>(center.size());
  if (inner.kind() == MapKind::Identity && outer.kind() == MapKind::Identity) return nodes::identity(d);
  if (&inner.node() == &outer.node()) return inner;

  const auto dirs = sphere_directions(d, kNetDirections);
  double worst = 0.0;
  for (int s = 0; s <= 4; ++s) {
    const double r = rInner + (rOuter - rInner) * s / 4.0;
    for (const auto& u : dirs) {
      const Vec x = center + r * u;
      const double gap = (inner.eval(x) - outer.eval(x)).norm();
      worst = std::max(worst, gap / std::max(1.0, x.norm()));
    }
  }
  if (worst > kNetTolerance) {
    throw Error(ErrorKind::GlueConsistency, "inner and outer maps disagree on the annulus", worst);
  }
  return nodes::radial_glue(RadialGlueNode{center, rInner, rOuter, inner, outer});
}

SmoothMap compose(int dimension, const std::vector<SmoothMap>& stages) {
  std::vector<SmoothMap> kept;
  for (const auto& s : stages)
    if (s.kind() != MapKind::Identity) kept.push_back(s);
  if (kept.empty()) return nodes::identity(dimension);
  if (kept.size() == 1) return kept.front();
  return nodes::compose(dimension, std::move(kept));
}

}  // namespace isoextend
