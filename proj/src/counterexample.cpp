#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "isoextend/alignment.hpp"
#include "isoextend/certification.hpp"
#include "isoextend/errors.hpp"

namespace isoextend {

namespace {

// n + 1 unit vectors in R^n forming a regular simplex, the first one e_1.
std::vector<Vec> regular_simplex(int n) {
  if (n == 1) return {Vec::Constant(1, 1.0), Vec::Constant(1, -1.0)};
  std::vector<Vec> out{Vec::Unit(n, 0)};
  const double c = -1.0 / n;
  const double s = std::sqrt(1.0 - c * c);
  for (const Vec& u : regular_simplex(n - 1)) {
    Vec v(n);
    v[0] = c;
    v.tail(n - 1) = s * u;
    out.push_back(v);
  }
  return out;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Signed D!-scaled volume of the simplex on `idx`.
double signed_det(const PointConfig& p, const std::vector<std::size_t>& idx) {
  const int d = p.dimension();
  Mat m(d, d);
  for (int j = 0; j < d; ++j) m.col(j) = p[idx[j + 1]] - p[idx[0]];
  return m.determinant();
}

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

// Affine map sending the first D+1 of `from` onto `to`, projected onto O(D).
EuclideanMotion fit_motion(const std::vector<Vec>& from, const std::vector<Vec>& to) {
  const int d = static_cast<int>(from[0].size());
  Mat a(d, d), b(d, d);
  for (int j = 0; j < d; ++j) {
    a.col(j) = from[j + 1] - from[0];
    b.col(j) = to[j + 1] - to[0];
  }
  const Mat q = nearest_orthogonal(b * a.inverse());
  return EuclideanMotion(q, to[0] - q * from[0]);
}

}  // namespace

Counterexample build_counterexample(int dimension, double delta) {
  if (dimension < 2) throw Error(ErrorKind::Precondition, "counterexample needs D >= 2");
  if (!(delta > 0.0 && delta <= 0.1)) throw Error(ErrorKind::Precondition, "counterexample needs 0 < delta <= 1/10");
  const int d = dimension;
  const auto simplex = regular_simplex(d);
  const Vec w = (1.0 + delta) * Vec::Unit(d, 0);

  // Small simplex y_1..y_D, shared vertex y_{D+1} = delta e_1, then the large
  // simplex mirrored through w so that its vertex toward the origin is y_{D+1}.
  std::vector<Vec> y;
  for (int i = 1; i <= d; ++i) y.push_back(delta * simplex[i]);
  y.push_back(delta * simplex[0]);
  for (int i = 1; i <= d; ++i) y.push_back(w - simplex[i]);

  std::vector<Vec> z = y;
  std::swap(z[0], z[1]);

  Counterexample ce{PointConfig(d, y), PointConfig(d, z), w, 0.0};
  ce.measuredDelta = pairwise_distortion(ce.y, ce.z).delta;
  return ce;
}

ObstructionReport orientation_obstruction(const PointConfig& y, const PointConfig& zIn) {
  const PointConfig z = match_labels(y, zIn);
  const int d = y.dimension();
  const std::size_t k = y.size();
  ObstructionReport report;
  report.volumeThreshold = kVoluminousFraction * std::pow(diam(y), d) / factorial(d);
  if (k < static_cast<std::size_t>(d) + 1) return report;

  // Walk all (D+1)-subsets in lexicographic order.
  std::vector<std::size_t> idx(d + 1);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    const double dy = signed_det(y, idx);
    const double volume = std::abs(dy) / factorial(d);
    if (volume >= report.volumeThreshold) {
      const int ys = sign_of(dy), zs = sign_of(signed_det(z, idx));
      report.simplices.push_back({idx, volume, ys, zs});
      if (ys * zs > 0) ++report.preserving;
      else ++report.reversing;
    }
    int pos = d;
    while (pos >= 0 && idx[pos] == k - (d + 1) + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int j = pos + 1; j <= d; ++j) idx[j] = idx[j - 1] + 1;
  }
  report.conflict = report.preserving > 0 && report.reversing > 0;
  return report;
}

std::pair<int, int> counterexample_degrees(const Counterexample& ce) {
  const int d = ce.y.dimension();
  if (d != 2) throw Error(ErrorKind::Precondition, "degree pair is planar only");
  std::vector<Vec> smallY(ce.y.points().begin(), ce.y.points().begin() + d + 1);
  std::vector<Vec> smallZ(ce.z.points().begin(), ce.z.points().begin() + d + 1);
  std::vector<Vec> largeY(ce.y.points().begin() + d, ce.y.points().end());
  std::vector<Vec> largeZ(ce.z.points().begin() + d, ce.z.points().end());
  const double delta = ce.y[d].norm();
  const SmoothMap smallMap = nodes::motion(fit_motion(smallY, smallZ));
  const SmoothMap largeMap = nodes::motion(fit_motion(largeY, largeZ));
  return {winding_degree(smallMap, Vec::Zero(d), delta), winding_degree(largeMap, ce.largeCenter, 1.0)};
}

}  // namespace isoextend
