#pragma once

#include <cstddef>
#include <vector>

#include "isoextend/point_config.hpp"

namespace isoextend {

// Pigeonhole partition of a finite set into small, mutually far clusters.
// Clusters hold point indices; cluster 0 contains index 0, the rest follow in
// order of their smallest index. Each representative is its cluster's
// smallest index.
struct ClusterPartition {
  double base = 0.1;
  int scaleExponent = 10;
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<std::size_t> representatives;
};

inline constexpr int kMinScaleExponent = 10;

inline int max_scale_exponent(std::size_t k) { return 100 + static_cast<int>(k * (k - 1) / 2); }

// Smallest l in [10, 100 + k(k-1)/2] such that no pairwise distance lies in
// (eta^l diam, eta^(l-1) diam].
int pigeonhole_scale(const PointConfig& points, double eta);

ClusterPartition partition(const PointConfig& points, double eta);

PointConfig representative_subconfig(const PointConfig& points, const ClusterPartition& p);

}  // namespace isoextend
