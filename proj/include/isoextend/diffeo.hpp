#pragma once

#include <optional>
#include <vector>

#include "isoextend/smooth_map.hpp"

namespace isoextend {

// Analytic distortion bound of a shear I + u w^T with |u||w| = g, u _|_ w.
double shear_budget(double g);
// Analytic distortion bound of a rank-one perturbation I + u w^T, |u||w| = g < 1.
double rank_one_budget(double g);

SmoothMap identity_map(int dimension);
SmoothMap motion_map(const EuclideanMotion& motion);

// Equals the rotation on |x - center| <= r1 and the identity beyond r2.
SmoothMap make_slow_twist(const RotationFactorization& rotation, double r1, double r2, double epsilon,
                          const std::optional<Vec>& center = std::nullopt, double slowness = kSlownessConstant);

// Equals the proper motion on |x - center| <= r1 and the identity beyond r2:
// a twist on [r1, sqrt(r1 r2)] followed by a translation blended over
// [sqrt(r1 r2), r2]. The motion's displacement of `center` must be at most
// slowness * epsilon * r1.
SmoothMap make_slide(const EuclideanMotion& motion, double r1, double r2, double epsilon,
                     const std::optional<Vec>& center = std::nullopt, double slowness = kSlownessConstant);

// Sends x to xPrime, identity beyond r2 about `center` (origin by default).
SmoothMap make_point_mover(const Vec& x, const Vec& xPrime, double r1, double r2, double epsilon,
                           const std::optional<Vec>& center = std::nullopt, double slowness = kSlownessConstant);

SmoothMap ball_patch(int dimension, std::vector<PatchBall> entries);

SmoothMap radial_glue(const Vec& center, double rInner, double rOuter, const SmoothMap& inner,
                      const SmoothMap& outer);

// Applies `stages` first to last; identity stages are dropped.
SmoothMap compose(int dimension, const std::vector<SmoothMap>& stages);

// Deterministic set of unit directions in R^D used for sphere nets.
std::vector<Vec> sphere_directions(int dimension, int count);

}  // namespace isoextend
