#include "isoextend/alignment.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "isoextend/errors.hpp"

namespace isoextend {

DistortionReport pairwise_distortion(const PointConfig& y, const PointConfig& zIn, bool withTable) {
  const PointConfig z = match_labels(y, zIn);
  const std::size_t k = y.size();
  DistortionReport report;
  report.worstPair = {y.label(0), y.label(0)};
  if (withTable) report.ratioTable = Mat::Ones(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  double worst = -1.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double r = (z[i] - z[j]).norm() / (y[i] - y[j]).norm();
      const double dev = std::max(r, 1.0 / r) - 1.0;
      if (withTable) {
        (*report.ratioTable)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r;
        (*report.ratioTable)(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = r;
      }
      if (dev > worst) {
        worst = dev;
        report.worstPair = {y.label(i), y.label(j)};
      }
    }
  }
  report.delta = std::max(worst, 0.0);
  return report;
}

NormalizedPair normalize_pair(const PointConfig& y, const PointConfig& zIn) {
  const PointConfig z = match_labels(y, zIn);
  const std::size_t k = y.size();
  if (k < 2) throw Error(ErrorKind::Degenerate, "normalization needs at least two points");
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i != j) total += (y[i] - y[j]).squaredNorm() + (z[i] - z[j]).squaredNorm();
  const double scale = 1.0 / std::sqrt(total);
  std::vector<Vec> ys, zs;
  for (std::size_t i = 0; i < k; ++i) {
    ys.push_back(scale * (y[i] - y[0]));
    zs.push_back(scale * (z[i] - z[0]));
  }
  return {PointConfig(y.dimension(), std::move(ys), y.labels()),
          PointConfig(z.dimension(), std::move(zs), z.labels()), scale};
}

AlignmentResult evaluate_alignment(const EuclideanMotion& motion, const PointConfig& y, const PointConfig& zIn) {
  const PointConfig z = match_labels(y, zIn);
  double maxr = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = (z[i] - motion(y[i])).norm();
    maxr = std::max(maxr, r);
    sumsq += r * r;
  }
  const double d = diam(y);
  AlignmentResult result{motion, maxr, 0.0, std::sqrt(sumsq / static_cast<double>(y.size()))};
  result.relativeResidual = d > 0 ? maxr / d : 0.0;
  return result;
}

namespace {

// Orthogonal Q maximizing tr(Q^T cross). When the proper optimum needs a
// reflection of the points themselves, returns the improper optimum and sets
// `viaReflection`.
Mat fit_rotation(const Mat& cross, bool forceProper, bool reflectPoints, bool& viaReflection) {
  const auto dim = cross.rows();
  Eigen::JacobiSVD<Mat> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (sv[i] > 1e-12 * sv[0]) ++rank;

  viaReflection = false;
  Mat q;
  if (rank < dim - 1) {
    // The optimum only fixes Q on the span of the data; on the complement
    // take the rotation closest to the identity.
    const Mat ur = svd.matrixU().leftCols(rank), vr = svd.matrixV().leftCols(rank);
    const Mat uc = svd.matrixU().rightCols(dim - rank), vc = svd.matrixV().rightCols(dim - rank);
    Eigen::JacobiSVD<Mat> inner(uc.transpose() * vc, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat w = inner.matrixU() * inner.matrixV().transpose();
    q = ur * vr.transpose() + uc * w * vc.transpose();
    if (forceProper && q.determinant() < 0) {
      Mat flip = Mat::Identity(dim - rank, dim - rank);
      flip(dim - rank - 1, dim - rank - 1) = -1.0;
      w = inner.matrixU() * flip * inner.matrixV().transpose();
      q = ur * vr.transpose() + uc * w * vc.transpose();
    }
  } else {
    q = svd.matrixU() * svd.matrixV().transpose();
    if (forceProper && q.determinant() < 0) {
      if (reflectPoints) {
        viaReflection = true;
      } else {
        Mat flip = Mat::Identity(dim, dim);
        flip(dim - 1, dim - 1) = -1.0;
        q = svd.matrixU() * flip * svd.matrixV().transpose();
      }
    }
  }
  // Re-orthogonalize to keep the motion invariant tight after roundoff.
  return nearest_orthogonal(q);
}

AlignmentResult finish(const Mat& cross, const PointConfig& y, const PointConfig& z, bool forceProper) {
  const std::size_t k = y.size();
  const auto dim = static_cast<Eigen::Index>(y.dimension());
  Vec ybar = Vec::Zero(dim), zbar = Vec::Zero(dim);
  for (std::size_t i = 0; i < k; ++i) {
    ybar += y[i];
    zbar += z[i];
  }
  ybar /= static_cast<double>(k);
  zbar /= static_cast<double>(k);
  bool viaReflection = false;
  const Mat q = fit_rotation(cross, forceProper, k <= static_cast<std::size_t>(dim), viaReflection);
  EuclideanMotion motion(q, zbar - q * ybar);
  if (viaReflection) motion = motion.after(reflection_fixing(y.points()));
  return evaluate_alignment(motion, y, z);
}

}  // namespace

AlignmentResult procrustes_align(const PointConfig& y, const PointConfig& zIn, bool forceProper) {
  const PointConfig z = match_labels(y, zIn);
  const std::size_t k = y.size();
  const auto dim = static_cast<Eigen::Index>(y.dimension());
  if (k == 1) return evaluate_alignment(EuclideanMotion::translation(z[0] - y[0]), y, z);

  Vec ybar = Vec::Zero(dim), zbar = Vec::Zero(dim);
  for (std::size_t i = 0; i < k; ++i) {
    ybar += y[i];
    zbar += z[i];
  }
  ybar /= static_cast<double>(k);
  zbar /= static_cast<double>(k);
  Mat cross = Mat::Zero(dim, dim);
  for (std::size_t i = 0; i < k; ++i) cross += (z[i] - zbar) * (y[i] - ybar).transpose();
  return finish(cross, y, z, forceProper);
}

AlignmentResult direction_align(const PointConfig& y, const PointConfig& zIn, bool forceProper) {
  const PointConfig z = match_labels(y, zIn);
  const std::size_t k = y.size();
  const auto dim = static_cast<Eigen::Index>(y.dimension());
  if (k == 1) return evaluate_alignment(EuclideanMotion::translation(z[0] - y[0]), y, z);
  Mat cross = Mat::Zero(dim, dim);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      const double len = (y[i] - y[j]).norm();
      cross += ((z[i] - z[j]) / len) * ((y[i] - y[j]) / len).transpose();
    }
  return finish(cross, y, z, forceProper);
}

double distance_stress(const PointConfig& y, const PointConfig& zIn) {
  const PointConfig z = match_labels(y, zIn);
  double f = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (i == j) continue;
      const double diff = (y[i] - y[j]).squaredNorm() - (z[i] - z[j]).squaredNorm();
      f += diff * diff;
    }
  return f;
}

}  // namespace isoextend
