#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isoextend/certification.hpp"
#include "isoextend/clustering.hpp"
#include "isoextend/diffeo.hpp"

namespace isoextend {

struct ExtensionParams {
  double epsilon = 0.0;
  double deltaMax = 0.0;
  double lambda = 0.0;
  int m = 0;
  double deltaPrime = 0.0;
  std::size_t maxDepth = 0;
  double slowness = kSlownessConstant;
};

// Concrete parameter schedule. Throws DimensionConstraint for k > D and
// Budget for epsilon outside (0, 1/2] or when deltaMax underflows.
ExtensionParams derive_params(double epsilon, int dimension, std::size_t k);

// One recursion level: the points handled, their clustering, and the stage
// radii. Children are the multi-point clusters, in cluster order.
struct ExtensionTrace {
  std::vector<std::string> labels;
  std::size_t depth = 0;
  int scaleExponent = 0;
  std::vector<std::vector<std::string>> clusters;
  double diameter = 0.0;
  double rotationAngle = 0.0;
  double alignmentResidual = 0.0;
  double moverLimit = 0.0;
  double truncationRadius = 0.0;
  double supportRadius = 0.0;
  std::vector<ExtensionTrace> children;
};

struct ExtensionResult {
  SmoothMap map;
  double certifiedEpsilon = 0.0;
  double supportRadius = 0.0;
  ExtensionParams params;
  ExtensionTrace trace;
  std::optional<CertificationReport> certification;
  int rounds = 0;
  // Translation z_1 - y_1 composed after the core map when y_1 != z_1.
  std::optional<Vec> pretranslation;
};

struct ExtendOptions {
  std::size_t pairs = 2000;
  std::size_t jacobians = 2000;
  std::uint64_t seed = 1;
  int maxRounds = 6;
  // Test hook: skips the k <= D and input-distortion guards.
  bool bypassGuards = false;
};

// Distortion of the correspondence beyond what rounding of the coordinates
// can explain: per pair, |ratio - 1| minus a resolution allowance.
double excess_distortion(const PointConfig& y, const PointConfig& z);

// Well-separated case: proper alignment, per-point movers, truncation of the
// motion far out and a radial glue. Requires y_1 = z_1 and the separation
// |y_i - y_j| >= lambda^m diam. Not certified.
ExtensionResult extend_well_separated(const PointConfig& y, const PointConfig& z, const ExtensionParams& params);

// Recursive construction followed by certification, retrying with halved
// slowness when the certifier finds a violation. Requires y_1 = z_1.
ExtensionResult extend_almost_isometry(const PointConfig& y, const PointConfig& z, double epsilon,
                                       const ExtendOptions& options = {});

// As above for arbitrary y_1, z_1: extends y -> z - (z_1 - y_1) and composes
// a compactly supported slide realizing the translation.
ExtensionResult extend_with_pretranslation(const PointConfig& y, const PointConfig& z, double epsilon,
                                           const ExtendOptions& options = {});

}  // namespace isoextend
