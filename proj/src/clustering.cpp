#include "isoextend/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "isoextend/errors.hpp"

namespace isoextend {

namespace {

void check_inputs(const PointConfig& points, double eta) {
  if (points.size() < 2) throw Error(ErrorKind::Degenerate, "clustering needs at least two points");
  if (!(eta > 0.0 && eta <= 0.1)) throw Error(ErrorKind::Precondition, "base must lie in (0, 1/10]", eta);
}

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

}  // namespace

int pigeonhole_scale(const PointConfig& points, double eta) {
  check_inputs(points, eta);
  const double d = diam(points);
  std::vector<double> dists;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) dists.push_back((points[i] - points[j]).norm());

  const int lmax = max_scale_exponent(points.size());
  for (int l = kMinScaleExponent; l <= lmax; ++l) {
    const double lo = std::pow(eta, l) * d;
    const double hi = std::pow(eta, l - 1) * d;
    const bool occupied = std::any_of(dists.begin(), dists.end(), [&](double x) { return x > lo && x <= hi; });
    if (!occupied) return l;
  }
  throw Error(ErrorKind::InternalInvariant, "no empty annulus found; pigeonhole bound violated");
}

ClusterPartition partition(const PointConfig& points, double eta) {
  const int l = pigeonhole_scale(points, eta);
  const double threshold = std::pow(eta, l) * diam(points);
  const std::size_t k = points.size();
  DisjointSets sets(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if ((points[i] - points[j]).norm() <= threshold) sets.unite(i, j);

  // Roots are the smallest member of each set, so scanning indices in order
  // yields clusters ordered by minimum index with index 0 first.
  ClusterPartition result;
  result.base = eta;
  result.scaleExponent = l;
  std::vector<std::size_t> slot(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t root = sets.find(i);
    if (slot[root] == k) {
      slot[root] = result.clusters.size();
      result.clusters.emplace_back();
      result.representatives.push_back(i);
    }
    result.clusters[slot[root]].push_back(i);
  }
  return result;
}

PointConfig representative_subconfig(const PointConfig& points, const ClusterPartition& p) {
  if (p.clusters.size() < 2 && points.size() >= 2) {
    throw Error(ErrorKind::InternalInvariant, "a partition of k >= 2 points cannot have a single cluster");
  }
  return points.subset(p.representatives);
}

}  // namespace isoextend
