#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

namespace isoextend {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// A labeled k-point configuration in R^D. Immutable; construction enforces
// D >= 2, k >= 1, consistent coordinate counts, unique labels and pairwise
// distinct points.
class PointConfig {
 public:
  PointConfig(int dimension, std::vector<Vec> points, std::vector<std::string> labels);

  // Labels default to "1".."k".
  PointConfig(int dimension, std::vector<Vec> points);

  // One point per row.
  static PointConfig from_rows(const Mat& rows);

  int dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return points_.size(); }
  const Vec& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Vec>& points() const noexcept { return points_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }

  // Index of `label`, or size() when absent.
  std::size_t index_of(const std::string& label) const;

  double min_pairwise_distance() const;

  // Subconfiguration keeping `indices` in the given order.
  PointConfig subset(const std::vector<std::size_t>& indices) const;

 private:
  int dimension_;
  std::vector<Vec> points_;
  std::vector<std::string> labels_;
};

// Max pairwise distance; 0 for k = 1.
double diam(const PointConfig& config);

// Reorders `z` so that its labels follow `y`'s order. Throws Correspondence
// when cardinality, dimension or label sets differ.
PointConfig match_labels(const PointConfig& y, const PointConfig& z);

}  // namespace isoextend
