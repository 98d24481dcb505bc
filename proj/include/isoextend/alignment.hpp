#pragma once

#include <optional>
#include <string>
#include <utility>

#include "isoextend/geometry.hpp"

namespace isoextend {

struct DistortionReport {
  // All ratios |z_i - z_j| / |y_i - y_j| lie in [(1+delta)^-1, 1+delta].
  double delta = 0.0;
  std::pair<std::string, std::string> worstPair;
  std::optional<Mat> ratioTable;
};

struct AlignmentResult {
  EuclideanMotion motion;
  double maxResidual = 0.0;
  double relativeResidual = 0.0;
  double rmsResidual = 0.0;
};

struct NormalizedPair {
  PointConfig y;
  PointConfig z;
  double scale;
};

// `z` is matched to `y` by label in every function below.
DistortionReport pairwise_distortion(const PointConfig& y, const PointConfig& z, bool withTable = false);

// Translates y_1 = z_1 = 0 and scales jointly so that the ordered-pair sums of
// squared distances of both sets add to 1.
NormalizedPair normalize_pair(const PointConfig& y, const PointConfig& z);

// Least-squares motion mapping y onto z. With forceProper the result is in
// SO(D); when k <= D an improper optimum is composed with a reflection fixing
// the y's, otherwise the smallest singular direction is flipped. When the
// centered points span fewer than D-1 dimensions the free part of Q is the
// rotation of the complement closest to the identity.
AlignmentResult procrustes_align(const PointConfig& y, const PointConfig& z, bool forceProper);

// As procrustes_align, but the rotation is fitted to the unit pair
// directions (y_i - y_j) / |y_i - y_j|, so tight sub-clusters weigh as much
// as the widest pairs. Exact for exact motions at any scale spread.
AlignmentResult direction_align(const PointConfig& y, const PointConfig& z, bool forceProper);

// Residual fields of `motion` mapping y onto z.
AlignmentResult evaluate_alignment(const EuclideanMotion& motion, const PointConfig& y, const PointConfig& z);

// Sum over ordered pairs i != j of (|y_i-y_j|^2 - |z_i-z_j|^2)^2.
double distance_stress(const PointConfig& y, const PointConfig& z);

}  // namespace isoextend
