#pragma once

#include <random>

#include "isoextend/alignment.hpp"
#include "isoextend/smooth_map.hpp"

namespace testing_support {

using isoextend::Mat;
using isoextend::Vec;

inline Vec gaussian(int d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = n(rng);
  return v;
}

// Haar-ish orthogonal matrix; `proper` selects the determinant sign.
inline Mat random_orthogonal(int d, std::mt19937_64& rng, bool proper = true) {
  Mat a(d, d);
  for (int c = 0; c < d; ++c) a.col(c) = gaussian(d, rng);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  const bool isProper = q.determinant() > 0;
  if (isProper != proper) q.col(0) = -q.col(0);
  return q;
}

inline isoextend::PointConfig random_config(std::size_t k, int d, std::mt19937_64& rng, double scale = 1.0) {
  std::vector<Vec> pts;
  for (std::size_t i = 0; i < k; ++i) pts.push_back(gaussian(d, rng, scale));
  return isoextend::PointConfig(d, pts);
}

inline isoextend::PointConfig apply(const isoextend::EuclideanMotion& m, const isoextend::PointConfig& p) {
  std::vector<Vec> pts;
  for (const auto& x : p.points()) pts.push_back(m(x));
  return isoextend::PointConfig(p.dimension(), pts, p.labels());
}

// Central differences in extended precision.
inline Mat finite_difference_jacobian(const isoextend::SmoothMap& map, const Vec& x, double h) {
  const int d = static_cast<int>(x.size());
  Mat j(d, d);
  for (int c = 0; c < d; ++c) {
    isoextend::XVec a = isoextend::extend(x), b = a;
    a[c] += h;
    b[c] -= h;
    j.col(c) = ((map.eval_extended(a) - map.eval_extended(b)) / (2.0L * h)).cast<double>();
  }
  return j;
}

inline Vec random_direction(int d, std::mt19937_64& rng) { return gaussian(d, rng).normalized(); }

}  // namespace testing_support
