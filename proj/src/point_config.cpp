#include "isoextend/point_config.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

#include "isoextend/errors.hpp"

namespace isoextend {

namespace {

std::vector<std::string> default_labels(std::size_t k) {
  std::vector<std::string> labels;
  labels.reserve(k);
  for (std::size_t i = 0; i < k; ++i) labels.push_back(std::to_string(i + 1));
  return labels;
}

}  // namespace

PointConfig::PointConfig(int dimension, std::vector<Vec> points, std::vector<std::string> labels)
    : dimension_(dimension), points_(std::move(points)), labels_(std::move(labels)) {
  if (dimension_ < 2) {
    throw Error(ErrorKind::Degenerate, "dimension must be at least 2, got " + std::to_string(dimension_));
  }
  if (points_.empty()) throw Error(ErrorKind::Degenerate, "a configuration needs at least one point");
  if (labels_.size() != points_.size()) {
    throw Error(ErrorKind::Correspondence, "label count does not match point count");
  }
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].size() != dimension_) {
      throw Error(ErrorKind::Degenerate, "point " + labels_[i] + " has " + std::to_string(points_[i].size()) +
                                             " coordinates, expected " + std::to_string(dimension_));
    }
    if (!points_[i].allFinite()) throw Error(ErrorKind::Degenerate, "point " + labels_[i] + " is not finite");
    if (!seen.insert(labels_[i]).second) throw Error(ErrorKind::Correspondence, "duplicate label " + labels_[i]);
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      if ((points_[i] - points_[j]).norm() <= 0.0) {
        throw Error(ErrorKind::Distinctness, "points " + labels_[i] + " and " + labels_[j] + " coincide");
      }
    }
  }
}

PointConfig::PointConfig(int dimension, std::vector<Vec> points)
    : PointConfig(dimension, points, default_labels(points.size())) {}

PointConfig PointConfig::from_rows(const Mat& rows) {
  std::vector<Vec> points;
  points.reserve(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) points.emplace_back(rows.row(i).transpose());
  return PointConfig(static_cast<int>(rows.cols()), std::move(points));
}

std::size_t PointConfig::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  return static_cast<std::size_t>(it - labels_.begin());
}

double PointConfig::min_pairwise_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points_.size(); ++i)
    for (std::size_t j = i + 1; j < points_.size(); ++j) best = std::min(best, (points_[i] - points_[j]).norm());
  return best;
}

PointConfig PointConfig::subset(const std::vector<std::size_t>& indices) const {
  std::vector<Vec> pts;
  std::vector<std::string> labels;
  for (std::size_t i : indices) {
    pts.push_back(points_.at(i));
    labels.push_back(labels_.at(i));
  }
  return PointConfig(dimension_, std::move(pts), std::move(labels));
}

double diam(const PointConfig& config) {
  double d = 0.0;
  for (std::size_t i = 0; i < config.size(); ++i)
    for (std::size_t j = i + 1; j < config.size(); ++j) d = std::max(d, (config[i] - config[j]).norm());
  return d;
}

PointConfig match_labels(const PointConfig& y, const PointConfig& z) {
  if (y.size() != z.size()) {
    throw Error(ErrorKind::Correspondence,
                "cardinality mismatch: " + std::to_string(y.size()) + " vs " + std::to_string(z.size()));
  }
  if (y.dimension() != z.dimension()) {
    throw Error(ErrorKind::Correspondence, "dimension mismatch: " + std::to_string(y.dimension()) + " vs " +
                                               std::to_string(z.dimension()));
  }
  std::vector<std::size_t> order;
  order.reserve(y.size());
  for (const auto& label : y.labels()) {
    std::size_t idx = z.index_of(label);
    if (idx == z.size()) throw Error(ErrorKind::Correspondence, "label " + label + " missing from second set");
    order.push_back(idx);
  }
  return z.subset(order);
}

}  // namespace isoextend
