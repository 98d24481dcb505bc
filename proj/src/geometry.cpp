#include "isoextend/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "isoextend/errors.hpp"

namespace isoextend {

namespace {

constexpr double kPi = 3.14159265358979323846;

double orthogonality_defect(const Mat& q) {
  return (q.transpose() * q - Mat::Identity(q.rows(), q.cols())).norm();
}

// Flip `v` so that its largest-magnitude entry is positive (first index wins ties).
bool needs_flip(const Eigen::Ref<const Vec>& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best]) + 1e-12) best = i;
  return v[best] < 0;
}

}  // namespace

EuclideanMotion::EuclideanMotion(Mat linear, Vec translation)
    : linear_(std::move(linear)), translation_(std::move(translation)) {
  if (linear_.rows() != linear_.cols() || linear_.rows() != translation_.size()) {
    throw Error(ErrorKind::Precondition, "motion matrix and translation sizes disagree");
  }
  const double defect = orthogonality_defect(linear_);
  if (!(defect <= kOrthogonalityTol)) {
    throw Error(ErrorKind::Precondition, "linear part is not orthogonal", defect);
  }
  const double det = linear_.determinant();
  if (std::abs(std::abs(det) - 1.0) > kDeterminantTol) {
    throw Error(ErrorKind::Precondition, "determinant is not +-1", det);
  }
  proper_ = det > 0;
}

EuclideanMotion EuclideanMotion::identity(int dimension) {
  return EuclideanMotion(Mat::Identity(dimension, dimension), Vec::Zero(dimension));
}

EuclideanMotion EuclideanMotion::translation(Vec offset) {
  const auto d = offset.size();
  return EuclideanMotion(Mat::Identity(d, d), std::move(offset));
}

EuclideanMotion EuclideanMotion::after(const EuclideanMotion& other) const {
  return EuclideanMotion(linear_ * other.linear_, linear_ * other.translation_ + translation_);
}

EuclideanMotion EuclideanMotion::inverse() const {
  Mat qt = linear_.transpose();
  Vec t = -(qt * translation_);
  return EuclideanMotion(std::move(qt), std::move(t));
}

Mat planar_rotation(double angle) {
  Mat r(2, 2);
  const double c = std::cos(angle), s = std::sin(angle);
  r << c, -s, s, c;
  return r;
}

double RotationFactorization::max_abs_angle() const {
  double m = 0.0;
  for (double a : angles) m = std::max(m, std::abs(a));
  return m;
}

Mat RotationFactorization::block(double fraction) const {
  const int d = dimension();
  Mat b = Mat::Identity(d, d);
  for (std::size_t j = 0; j < angles.size(); ++j) {
    b.block(2 * j, 2 * j, 2, 2) = planar_rotation(fraction * angles[j]);
  }
  return b;
}

Mat RotationFactorization::reconstruct() const { return frame * block() * frame.transpose(); }

Mat nearest_orthogonal(const Mat& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw Error(ErrorKind::Precondition, "expected a square matrix");
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  const double tol = std::max(1.0, sv[0]) * 1e-12 * static_cast<double>(m.rows());
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > tol) ++rank;
  if (rank < m.rows()) {
    throw Error(ErrorKind::RankDeficiency,
                "matrix has numerical rank " + std::to_string(rank) + " < " + std::to_string(m.rows()),
                static_cast<double>(rank));
  }
  return svd.matrixU() * svd.matrixV().transpose();
}

RotationFactorization factor_rotation(const Mat& rotation) {
  const auto d = rotation.rows();
  if (d != rotation.cols() || d < 2) throw Error(ErrorKind::Precondition, "expected a square matrix, D >= 2");
  const double defect = orthogonality_defect(rotation);
  if (!(defect <= kReconstructionTol)) throw Error(ErrorKind::Precondition, "matrix is not orthogonal", defect);
  if (rotation.determinant() < 0) throw Error(ErrorKind::ImproperRotation, "determinant is -1");

  Eigen::RealSchur<Mat> schur(rotation);
  const Mat& t = schur.matrixT();
  const Mat& u = schur.matrixU();

  struct Plane {
    Vec a, b;
    double angle;
  };
  std::vector<Plane> planes;
  std::vector<Vec> plus, minus;
  for (Eigen::Index i = 0; i < d;) {
    if (i + 1 < d && std::abs(t(i + 1, i)) > 1e-14) {
      const double s = 0.5 * (t(i + 1, i) - t(i, i + 1));
      const double c = 0.5 * (t(i, i) + t(i + 1, i + 1));
      planes.push_back({u.col(i), u.col(i + 1), std::atan2(s, c)});
      i += 2;
    } else {
      (t(i, i) > 0 ? plus : minus).push_back(u.col(i));
      i += 1;
    }
  }
  if (minus.size() % 2 != 0) throw Error(ErrorKind::ImproperRotation, "odd number of -1 eigenvalues");
  for (std::size_t j = 0; j + 1 < minus.size(); j += 2) planes.push_back({minus[j], minus[j + 1], kPi});
  std::size_t p = 0;
  while (static_cast<Eigen::Index>(planes.size()) < d / 2) {
    planes.push_back({plus[p], plus[p + 1], 0.0});
    p += 2;
  }

  for (auto& plane : planes) {
    if (plane.angle < 0) {
      plane.b = -plane.b;
      plane.angle = -plane.angle;
    }
    if (plane.angle > kPi) plane.angle = kPi;
    if (needs_flip(plane.a)) {
      plane.a = -plane.a;
      plane.b = -plane.b;
    }
  }
  std::stable_sort(planes.begin(), planes.end(),
                   [](const Plane& x, const Plane& y) { return std::abs(x.angle) > std::abs(y.angle); });

  RotationFactorization f;
  f.frame.resize(d, d);
  Eigen::Index col = 0;
  for (const auto& plane : planes) {
    f.frame.col(col++) = plane.a;
    f.frame.col(col++) = plane.b;
    f.angles.push_back(plane.angle);
  }
  for (; p < plus.size(); ++p) {
    Vec v = plus[p];
    if (needs_flip(v)) v = -v;
    f.frame.col(col++) = v;
  }
  f.fixedBlock = static_cast<int>(d - 2 * static_cast<Eigen::Index>(planes.size()));

  const double err = (f.reconstruct() - rotation).norm();
  if (!(err <= kReconstructionTol)) {
    throw Error(ErrorKind::InternalInvariant, "rotation factorization does not reconstruct its input", err);
  }
  return f;
}

EuclideanMotion reflection_fixing(const std::vector<Vec>& points) {
  if (points.empty()) throw Error(ErrorKind::Precondition, "need at least one point");
  const auto d = points.front().size();
  const Vec& base = points.front();
  double scale = 1.0;
  Mat diffs(d, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    diffs.col(static_cast<Eigen::Index>(i)) = points[i] - base;
    scale = std::max(scale, diffs.col(static_cast<Eigen::Index>(i)).norm());
  }
  Eigen::JacobiSVD<Mat> svd(diffs, Eigen::ComputeFullU);
  const Vec& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-10 * scale) ++rank;
  if (rank >= d) {
    throw Error(ErrorKind::NoFixingReflection, "points affinely span the whole space");
  }
  const Mat span = svd.matrixU().leftCols(rank);

  // Normal: projection of the coordinate axis with the largest component in
  // the orthogonal complement; ties go to the highest axis.
  Vec normal;
  double best = -1.0;
  for (Eigen::Index j = d - 1; j >= 0; --j) {
    Vec e = Vec::Unit(d, j);
    Vec proj = e - span * (span.transpose() * e);
    if (proj.norm() > best + 1e-12) {
      best = proj.norm();
      normal = proj;
    }
  }
  normal.normalize();
  Mat q = Mat::Identity(d, d) - 2.0 * normal * normal.transpose();
  Vec t = 2.0 * normal * normal.dot(base);
  return EuclideanMotion(std::move(q), std::move(t));
}

}  // namespace isoextend
