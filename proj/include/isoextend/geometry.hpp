#pragma once

#include <vector>

#include "isoextend/point_config.hpp"

namespace isoextend {

// Tolerances shared by the whole library.
inline constexpr double kOrthogonalityTol = 1e-12;
inline constexpr double kDeterminantTol = 1e-9;
inline constexpr double kReconstructionTol = 1e-10;

// x -> Q x + t with Q orthogonal. `proper` mirrors sign(det Q).
class EuclideanMotion {
 public:
  EuclideanMotion(Mat linear, Vec translation);

  static EuclideanMotion identity(int dimension);
  static EuclideanMotion translation(Vec offset);

  int dimension() const noexcept { return static_cast<int>(translation_.size()); }
  const Mat& linear() const noexcept { return linear_; }
  const Vec& translation() const noexcept { return translation_; }
  bool proper() const noexcept { return proper_; }

  Vec operator()(const Vec& x) const { return linear_ * x + translation_; }

  // (*this) o other
  EuclideanMotion after(const EuclideanMotion& other) const;
  EuclideanMotion inverse() const;

 private:
  Mat linear_;
  Vec translation_;
  bool proper_;
};

// Q = R * blockdiag(rot(angles[0]), ..., rot(angles[m-1]), I_fixed) * R^T,
// rot(a) = [[cos a, -sin a], [sin a, cos a]].
struct RotationFactorization {
  Mat frame;
  std::vector<double> angles;
  int fixedBlock = 0;

  int dimension() const { return static_cast<int>(frame.rows()); }
  double max_abs_angle() const;
  // Block-diagonal factor with every angle scaled by `fraction`.
  Mat block(double fraction = 1.0) const;
  Mat reconstruct() const;
};

Mat planar_rotation(double angle);

// Polar projection onto O(D).
Mat nearest_orthogonal(const Mat& m);

RotationFactorization factor_rotation(const Mat& rotation);

// Improper motion fixing every input point (points must not affinely span R^D).
EuclideanMotion reflection_fixing(const std::vector<Vec>& points);

}  // namespace isoextend
