#include "isoextend/extension.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>

#include "isoextend/alignment.hpp"
#include "isoextend/errors.hpp"

namespace isoextend {

namespace {

constexpr double kLambdaBase = 0.02;
constexpr double kMoverBallFraction = 0.25;  // of the minimal separation
constexpr double kMoverPlateauFraction = 0.25;  // of the mover ball
constexpr double kGlueInner = 5.0;
constexpr double kGlueOuter = 10.0;
constexpr double kTruncationInner = 10.0;
constexpr double kTruncationMinOuter = 20.0;
constexpr double kInterpolationTolerance = 1e-9;
constexpr double kResolutionFactor = 64.0;

bool same_point(const Vec& a, const Vec& b) {
  return (a - b).norm() <= 1e-12 * std::max(1.0, std::max(a.norm(), b.norm()));
}

std::vector<std::string> labels_of(const PointConfig& p, const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(p.label(i));
  return out;
}

// Movers, truncation and glue around a given proper motion.
SmoothMap well_separated_map(const PointConfig& y, const PointConfig& z, const ExtensionParams& params,
                             const EuclideanMotion& motion, ExtensionTrace& trace) {
  const int d = y.dimension();
  const std::size_t k = y.size();
  if (k < 2) return identity_map(d);
  if (!motion.proper()) throw Error(ErrorKind::Properness, "alignment motion must be proper");

  const double size = diam(y);
  const double sep = y.min_pairwise_distance();
  const double logFloor = params.m * std::log(params.lambda) + std::log(size);
  if (std::log(sep) < logFloor) {
    throw Error(ErrorKind::Precondition, "points are not separated by lambda^m diam", sep);
  }

  const double ballRadius = kMoverBallFraction * sep;
  const double plateau = kMoverPlateauFraction * ballRadius;
  const double limit = params.slowness * params.deltaPrime * plateau;
  trace.diameter = size;
  trace.moverLimit = limit;

  std::vector<Vec> images;
  double residual = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    images.push_back(motion(y[i]));
    residual = std::max(residual, (z[i] - images.back()).norm());
  }
  trace.alignmentResidual = residual;
  if (residual > limit) {
    throw Error(ErrorKind::AlignmentTooCoarse,
                "alignment residual " + std::to_string(residual) + " exceeds mover limit " + std::to_string(limit),
                limit);
  }

  std::vector<PatchBall> movers;
  for (std::size_t i = 0; i < k; ++i) {
    if (images[i] == z[i]) continue;
    SmoothMap mover =
        make_point_mover(images[i], z[i], plateau, ballRadius, params.deltaPrime, images[i], params.slowness);
    movers.push_back({images[i], ballRadius, std::move(mover)});
  }
  const SmoothMap inner = compose(d, {motion_map(motion), ball_patch(d, std::move(movers))});

  const Vec& c = y[0];
  const double angle = factor_rotation(motion.linear()).max_abs_angle();
  const double ratio = required_radius_ratio(angle, params.epsilon, params.slowness);
  const double outerScale = std::max(kTruncationMinOuter, kTruncationInner * ratio * ratio * (1.0 + 1e-9));
  const double r1 = kTruncationInner * size;
  const double r2 = outerScale * size;
  if (!std::isfinite(r2)) {
    throw Error(ErrorKind::Feasibility, "truncation radius overflows for rotation angle " + std::to_string(angle),
                ratio);
  }
  trace.rotationAngle = angle;
  trace.truncationRadius = r2;
  const SmoothMap outer = make_slide(motion, r1, r2, params.epsilon, c, params.slowness);
  return radial_glue(c, kGlueInner * size, kGlueOuter * size, inner, outer);
}

SmoothMap build_level(const PointConfig& y, const PointConfig& z, const ExtensionParams& params, std::size_t depth,
                      ExtensionTrace& trace) {
  const int d = y.dimension();
  const std::size_t k = y.size();
  trace.labels = y.labels();
  trace.depth = depth;
  if (k == 1) return identity_map(d);
  if (depth >= params.maxDepth) throw Error(ErrorKind::InternalInvariant, "recursion deeper than k");

  const EuclideanMotion motion = direction_align(y, z, true).motion;
  const ClusterPartition part = partition(y, params.lambda);
  trace.scaleExponent = part.scaleExponent;
  for (const auto& cl : part.clusters) trace.clusters.push_back(labels_of(y, cl));
  if (part.clusters.size() < 2) throw Error(ErrorKind::InternalInvariant, "partition produced a single cluster");

  const SmoothMap level =
      well_separated_map(y.subset(part.representatives), z.subset(part.representatives), params, motion, trace);

  std::vector<PatchBall> patches;
  for (const auto& cl : part.clusters) {
    if (cl.size() < 2) continue;
    const std::size_t rep = cl.front();
    const Vec shift = z[rep] - level.eval(y[rep]);
    std::vector<Vec> moved;
    for (auto i : cl) moved.push_back(i == rep ? z[rep] : Vec(level.eval(y[i]) + shift));
    const PointConfig ySub(d, moved, labels_of(y, cl));
    const PointConfig zSub = z.subset(cl);

    ExtensionTrace child;
    SmoothMap sub = build_level(ySub, zSub, params, depth + 1, child);
    const double radius = sub.support_radius(z[rep]);
    if (!std::isfinite(radius)) throw Error(ErrorKind::InternalInvariant, "cluster map is not compactly supported");
    for (std::size_t j = 0; j < k; ++j) {
      if (std::find(cl.begin(), cl.end(), j) != cl.end()) continue;
      if ((z[j] - z[rep]).norm() <= radius) {
        throw Error(ErrorKind::Disjointness, "cluster ball of " + y.label(rep) + " contains target " + y.label(j),
                    radius);
      }
    }
    child.supportRadius = radius;
    trace.children.push_back(std::move(child));
    if (sub.kind() != MapKind::Identity) patches.push_back({z[rep], radius, std::move(sub)});
  }

  SmoothMap result = compose(d, {level, ball_patch(d, std::move(patches))});
  trace.supportRadius = result.support_radius(y[0]);
  return result;
}

Ball certification_region(const SmoothMap& map, const PointConfig& y) {
  const double r = map.support_radius(y[0]);
  return {y[0], r > 0.0 ? r : std::max(diam(y), 1.0)};
}

// Compactly supported translation by t about c covering every target.
SmoothMap translation_slide(const Vec& c, const Vec& t, double reach, double epsilon, double slowness) {
  const double r1 = std::max(2.0 * reach, 2.0 * t.norm() / (slowness * epsilon));
  return make_slide(EuclideanMotion::translation(t), r1, 4.0 * r1, epsilon, c, slowness);
}

ExtensionResult run_extension(const PointConfig& y, const PointConfig& zIn, double epsilon, const ExtendOptions& options,
                              const std::optional<Vec>& pretranslation) {
  const PointConfig z = match_labels(y, zIn);
  const int d = y.dimension();
  const std::size_t k = y.size();
  if (k > static_cast<std::size_t>(d) && !options.bypassGuards) {
    throw Error(ErrorKind::DimensionConstraint,
                "k = " + std::to_string(k) + " > D = " + std::to_string(d) +
                    ": orientation obstructions can rule out any extension (run `isoextend counterexample`)");
  }
  ExtensionParams params = derive_params(epsilon, d, std::min(k, static_cast<std::size_t>(d)));
  params.maxDepth = k;

  // Core problem (y, z~) with z~_1 = y_1.
  std::vector<Vec> shifted = z.points();
  if (pretranslation) {
    for (auto& p : shifted) p -= *pretranslation;
    shifted[0] = y[0];
  }
  const PointConfig zCore(d, shifted, z.labels());
  if (!same_point(y[0], zCore[0])) {
    throw Error(ErrorKind::Precondition, "extension requires y_1 = z_1", (y[0] - zCore[0]).norm());
  }
  if (!options.bypassGuards) {
    const double excess = excess_distortion(y, zCore);
    if (excess > params.deltaMax) {
      throw Error(ErrorKind::Budget,
                  "input distortion " + std::to_string(excess) + " exceeds admissible deltaMax", params.deltaMax);
    }
  }

  CertifyOptions certOptions;
  certOptions.interpolation = std::make_pair(y.points(), z.points());
  certOptions.interpolationTolerance = kInterpolationTolerance;

  double worst = 0.0;
  for (int round = 1; round <= options.maxRounds; ++round) {
    ExtensionTrace trace;
    SmoothMap map = build_level(y, zCore, params, 0, trace);
    if (pretranslation) {
      const double reach = diam(zCore) + diam(y);
      map = compose(d, {map, translation_slide(y[0], *pretranslation, reach, epsilon, params.slowness)});
    }
    const Ball region = certification_region(map, y);
    certOptions.support = region;
    CertificationReport report =
        certify(map, region, epsilon, options.pairs, options.jacobians, options.seed, certOptions);
    worst = report.certifiedEpsilon;
    if (report.pass) {
      const double support = map.support_radius(y[0]);
      return ExtensionResult{std::move(map), report.certifiedEpsilon, support, params, std::move(trace),
                             std::move(report), round, pretranslation};
    }
    params.slowness *= 0.5;
  }
  throw Error(ErrorKind::Budget, "certification failed after " + std::to_string(options.maxRounds) + " rounds",
              worst);
}

}  // namespace

ExtensionParams derive_params(double epsilon, int dimension, std::size_t k) {
  if (k > static_cast<std::size_t>(dimension)) {
    throw Error(ErrorKind::DimensionConstraint,
                "k > D: orientation obstructions can rule out any extension (see the counterexample command)",
                static_cast<double>(k));
  }
  if (!(epsilon > 0.0 && epsilon <= 0.5)) throw Error(ErrorKind::Budget, "epsilon must lie in (0, 1/2]", epsilon);
  ExtensionParams p;
  p.epsilon = epsilon;
  p.m = 100 + dimension * (dimension - 1) / 2;
  p.deltaPrime = epsilon / (64.0 * dimension);
  p.lambda = kLambdaBase * std::pow(2.0 * epsilon, 0.1);
  const double logDelta = std::log(1e-9 * epsilon) + (p.m + 6) * std::log(p.lambda);
  if (logDelta < std::log(DBL_MIN)) {
    throw Error(ErrorKind::Budget, "admissible input distortion underflows double precision", logDelta);
  }
  p.deltaMax = std::min(p.deltaPrime, std::exp(logDelta));
  p.maxDepth = k;
  return p;
}

double excess_distortion(const PointConfig& y, const PointConfig& zIn) {
  const PointConfig z = match_labels(y, zIn);
  double worst = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (std::size_t j = i + 1; j < y.size(); ++j) {
      const double dy = (y[i] - y[j]).norm();
      const double dz = (z[i] - z[j]).norm();
      const double ratio = dz / dy;
      const double dev = std::max(ratio - 1.0, 1.0 / ratio - 1.0);
      const double scale = y[i].norm() + y[j].norm() + z[i].norm() + z[j].norm();
      const double allowance = kResolutionFactor * DBL_EPSILON * (1.0 + scale / dy);
      worst = std::max(worst, dev - allowance);
    }
  }
  return std::max(worst, 0.0);
}

ExtensionResult extend_well_separated(const PointConfig& y, const PointConfig& zIn, const ExtensionParams& params) {
  const PointConfig z = match_labels(y, zIn);
  if (!same_point(y[0], z[0])) throw Error(ErrorKind::Precondition, "requires y_1 = z_1", (y[0] - z[0]).norm());
  ExtensionTrace trace;
  trace.labels = y.labels();
  const EuclideanMotion motion =
      y.size() < 2 ? EuclideanMotion::identity(y.dimension()) : procrustes_align(y, z, true).motion;
  SmoothMap map = well_separated_map(y, z, params, motion, trace);
  const double support = map.support_radius(y[0]);
  trace.supportRadius = support;
  const double budget = map.budget();
  return ExtensionResult{std::move(map), budget, support, params, std::move(trace), std::nullopt, 0, std::nullopt};
}

ExtensionResult extend_almost_isometry(const PointConfig& y, const PointConfig& z, double epsilon,
                                       const ExtendOptions& options) {
  return run_extension(y, z, epsilon, options, std::nullopt);
}

ExtensionResult extend_with_pretranslation(const PointConfig& y, const PointConfig& zIn, double epsilon,
                                           const ExtendOptions& options) {
  const PointConfig z = match_labels(y, zIn);
  const Vec t = z[0] - y[0];
  if (t.norm() == 0.0) return run_extension(y, z, epsilon, options, std::nullopt);
  return run_extension(y, z, epsilon, options, t);
}

}  // namespace isoextend
