#include "isoextend/certification.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "isoextend/errors.hpp"

namespace isoextend {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Independent stream per (seed, stream, index) so sample i never depends on
// how many samples precede it.
std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return std::mt19937_64(splitmix(splitmix(seed) ^ splitmix(stream * 0x100000001b3ull + index)));
}

class Sampler {
 public:
  Sampler(const SmoothMap& map, const Ball& region) : region_(region), d_(map.dimension()) {
    map.collect_features(features_);
    features_.erase(std::remove_if(features_.begin(), features_.end(),
                                   [](const MapFeature& f) { return !(f.outer > 0.0) || !f.center.allFinite(); }),
                    features_.end());
  }

  // Keeps the pair separation above what long double can resolve at |x|.
  std::pair<Vec, Vec> pair(std::mt19937_64& rng, std::size_t index) const {
    auto [a, b] = raw_pair(rng, index);
    const double sep = (b - a).norm();
    const double floor = 1e-9 * std::max(a.norm(), b.norm());
    if (sep > 0.0 && sep < floor) b = a + (b - a) * (floor / sep);
    return {a, b};
  }

  std::pair<Vec, Vec> raw_pair(std::mt19937_64& rng, std::size_t index) const {
    const std::size_t category = index % 8;
    if (features_.empty() || category < 2) return global_pair(rng, category);
    switch (category) {
      case 2:
      case 3:
      case 4: {
        const Vec x = feature_point(rng);
        return {x, x + short_step(rng, scale_at(x)) };
      }
      case 5: return straddle_pair(rng);
      case 6: return {feature_point(rng), feature_point(rng)};
      default: {
        const Vec x = plateau_point(rng);
        return {x, x + short_step(rng, scale_at(x))};
      }
    }
  }

  Vec point(std::mt19937_64& rng, std::size_t index) const {
    const std::size_t category = index % 4;
    if (features_.empty() || category == 0) return log_radial(rng, region_.center, region_.radius);
    if (category == 3) return plateau_point(rng);
    return feature_point(rng);
  }

  Vec outside_point(std::mt19937_64& rng, const Ball& ball) const {
    const double r = ball.radius * std::pow(10.0, uniform(rng));
    return ball.center + std::max(r, ball.radius * (1.0 + 1e-9)) * direction(rng);
  }

 private:
  static double uniform(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

  Vec direction(std::mt19937_64& rng) const {
    std::normal_distribution<double> normal;
    Vec v(d_);
    do {
      for (int i = 0; i < d_; ++i) v[i] = normal(rng);
    } while (v.norm() < 1e-12);
    return v.normalized();
  }

  Vec log_radial(std::mt19937_64& rng, const Vec& c, double radius) const {
    return c + radius * std::pow(10.0, -6.0 * uniform(rng)) * direction(rng);
  }

  Vec uniform_ball(std::mt19937_64& rng, const Vec& c, double radius) const {
    return c + radius * std::pow(uniform(rng), 1.0 / d_) * direction(rng);
  }

  Vec short_step(std::mt19937_64& rng, double scale) const {
    const int decade = 1 + static_cast<int>(uniform(rng) * 6.0);
    return scale * std::pow(10.0, -decade) * direction(rng);
  }

  // Length scale of the nearest feature around x.
  double scale_at(const Vec& x) const {
    double best = region_.radius;
    double bestGap = std::numeric_limits<double>::infinity();
    for (const auto& f : features_) {
      const double r = (x - f.center).norm();
      const double gap = std::min(std::abs(r - f.inner), std::abs(r - f.outer));
      if (gap < bestGap) {
        bestGap = gap;
        best = std::max(f.inner, 1e-300);
      }
    }
    return best;
  }

  const MapFeature& pick(std::mt19937_64& rng) const {
    return features_[std::uniform_int_distribution<std::size_t>(0, features_.size() - 1)(rng)];
  }

  Vec feature_point(std::mt19937_64& rng) const {
    const MapFeature& f = pick(rng);
    double r;
    if (f.inner > 0.0 && f.outer > f.inner * (1.0 + 1e-12)) {
      r = f.inner * std::pow(f.outer / f.inner, uniform(rng));
    } else {
      r = f.outer * (1.0 + 0.2 * (uniform(rng) - 0.5));
    }
    return f.center + r * direction(rng);
  }

  Vec plateau_point(std::mt19937_64& rng) const {
    const MapFeature& f = pick(rng);
    const double r = f.inner > 0.0 ? f.inner : f.outer;
    return uniform_ball(rng, f.center, r);
  }

  std::pair<Vec, Vec> straddle_pair(std::mt19937_64& rng) const {
    const MapFeature& f = pick(rng);
    const double r = uniform(rng) < 0.5 ? f.inner : f.outer;
    const double radius = r > 0.0 ? r : f.outer;
    const double tau = std::pow(10.0, -1.0 - 5.0 * uniform(rng));
    const Vec u = direction(rng);
    Vec u2 = u + tau * direction(rng);
    u2.normalize();
    return {f.center + radius * (1.0 - tau) * u, f.center + radius * (1.0 + tau) * u2};
  }

  std::pair<Vec, Vec> global_pair(std::mt19937_64& rng, std::size_t category) const {
    if (category == 0) {
      const Vec x = log_radial(rng, region_.center, region_.radius);
      return {x, x + short_step(rng, std::max(x.norm(), (x - region_.center).norm()))};
    }
    return {uniform_ball(rng, region_.center, region_.radius), uniform_ball(rng, region_.center, region_.radius)};
  }

  Ball region_;
  int d_;
  std::vector<MapFeature> features_;
};

// For the inverse, the Jacobian at y is the inverse of the Jacobian at the
// preimage, so its singular values are the reciprocals.
std::pair<double, double> singular_extremes(const SmoothMap& map, const Vec& x, bool inverse) {
  const XVec at = inverse ? map.inverse_extended(extend(x)) : extend(x);
  Eigen::JacobiSVD<XMat> svd(map.jacobian_extended(at));
  const auto& sv = svd.singularValues();
  const double lo = static_cast<double>(sv[sv.size() - 1]), hi = static_cast<double>(sv[0]);
  if (inverse) return {1.0 / hi, 1.0 / lo};
  return {lo, hi};
}

double ratio_of(const SmoothMap& map, const Vec& x, const Vec& xPrime, bool inverse) {
  if (!inverse) return pair_ratio(map, x, xPrime);
  const XVec a = extend(x), b = extend(xPrime);
  const Real num = (map.inverse_extended(a) - map.inverse_extended(b)).norm();
  return static_cast<double>(num / (a - b).norm());
}

Vec apply(const SmoothMap& map, const Vec& x, bool inverse) { return inverse ? map.inverse_eval(x) : map.eval(x); }

}  // namespace

const char* to_string(Witness::Kind kind) {
  switch (kind) {
    case Witness::Kind::Pair: return "pair";
    case Witness::Kind::Jacobian: return "jacobian";
    case Witness::Kind::Interpolation: return "interpolation";
    case Witness::Kind::Support: return "support";
  }
  return "unknown";
}

double pair_ratio(const SmoothMap& map, const Vec& x, const Vec& xPrime) {
  const XVec a = extend(x), b = extend(xPrime);
  const Real num = (map.eval_extended(a) - map.eval_extended(b)).norm();
  const Real den = (a - b).norm();
  return static_cast<double>(num / den);
}

double replay_witness(const SmoothMap& map, const Witness& w) {
  switch (w.kind) {
    case Witness::Kind::Pair: return ratio_of(map, w.x, w.xPrime, w.inverse);
    case Witness::Kind::Jacobian: {
      const auto [lo, hi] = singular_extremes(map, w.x, w.inverse);
      // The witness records whichever extreme it was taken for.
      return std::abs(lo - w.value) <= std::abs(hi - w.value) ? lo : hi;
    }
    case Witness::Kind::Interpolation: return (apply(map, w.x, w.inverse) - w.xPrime).norm();
    case Witness::Kind::Support: return (apply(map, w.x, w.inverse) - w.x).norm();
  }
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {

CertificationReport certify_core(const SmoothMap& map, const Ball& region, double epsilon, std::size_t budgetPairs,
                                 std::size_t budgetJacobians, std::uint64_t seed, const CertifyOptions& options,
                                 bool inverse) {
  if (budgetPairs < kMinCertifySamples || budgetJacobians < kMinCertifySamples) {
    throw Error(ErrorKind::Precondition, "certification budgets must be at least 1000 samples");
  }
  if (!(region.radius > 0.0)) throw Error(ErrorKind::Precondition, "region radius must be positive");

  const Sampler sampler(map, region);
  CertificationReport report;
  report.epsilon = epsilon;
  report.seed = seed;
  report.pairSamples = budgetPairs;
  report.jacobianSamples = budgetJacobians;

  Witness high{Witness::Kind::Pair, {}, {}, 1.0}, low{Witness::Kind::Pair, {}, {}, 1.0};
  for (std::size_t i = 0; i < budgetPairs; ++i) {
    auto rng = sample_rng(seed, 1, i);
    auto [x, xp] = sampler.pair(rng, i);
    if ((x - xp).norm() == 0.0) continue;
    const double r = ratio_of(map, x, xp, inverse);
    if (r > high.value || high.x.size() == 0) high = {Witness::Kind::Pair, x, xp, r};
    if (r < low.value || low.x.size() == 0) low = {Witness::Kind::Pair, x, xp, r};
  }
  report.worstRatioHigh = high.value;
  report.worstRatioLow = low.value;

  Witness svMax{Witness::Kind::Jacobian, {}, {}, 1.0}, svMin{Witness::Kind::Jacobian, {}, {}, 1.0};
  for (std::size_t i = 0; i < budgetJacobians; ++i) {
    auto rng = sample_rng(seed, 2, i);
    const Vec x = sampler.point(rng, i);
    const auto [lo, hi] = singular_extremes(map, x, inverse);
    if (hi > svMax.value || svMax.x.size() == 0) svMax = {Witness::Kind::Jacobian, x, {}, hi};
    if (lo < svMin.value || svMin.x.size() == 0) svMin = {Witness::Kind::Jacobian, x, {}, lo};
  }
  report.singularValueRange = {svMin.value, svMax.value};

  report.certifiedEpsilon = std::max({0.0, report.worstRatioHigh - 1.0, 1.0 / report.worstRatioLow - 1.0,
                                      svMax.value * svMax.value - 1.0, 1.0 / (svMin.value * svMin.value) - 1.0});
  report.extremes = {high, low, svMax, svMin};

  const double limit = epsilon * (1.0 + kVerdictSlack);
  if (high.value - 1.0 > limit) report.failures.push_back(high);
  if (1.0 / low.value - 1.0 > limit) report.failures.push_back(low);
  if (svMax.value * svMax.value - 1.0 > limit) report.failures.push_back(svMax);
  if (1.0 / (svMin.value * svMin.value) - 1.0 > limit) report.failures.push_back(svMin);

  if (options.interpolation) {
    const auto& [ys, zs] = *options.interpolation;
    Witness worst{Witness::Kind::Interpolation, {}, {}, 0.0};
    for (std::size_t i = 0; i < ys.size(); ++i) {
      const double res = (apply(map, ys[i], inverse) - zs[i]).norm();
      if (res >= worst.value) worst = {Witness::Kind::Interpolation, ys[i], zs[i], res};
    }
    report.interpolationResidual = worst.value;
    if (worst.value > options.interpolationTolerance) report.failures.push_back(worst);
  }

  const Ball support = options.support.value_or(region);
  if (std::isfinite(support.radius)) {
    Witness worst{Witness::Kind::Support, {}, {}, 0.0};
    for (std::size_t i = 0; i < options.supportSamples; ++i) {
      auto rng = sample_rng(seed, 3, i);
      const Vec x = sampler.outside_point(rng, support);
      const double res = (apply(map, x, inverse) - x).norm();
      if (res >= worst.value) worst = {Witness::Kind::Support, x, {}, res};
    }
    report.supportSamples = options.supportSamples;
    report.supportResidual = worst.value;
    if (worst.value > options.supportTolerance) report.failures.push_back(worst);
  }

  report.pass = report.failures.empty();
  for (auto& w : report.extremes) w.inverse = inverse;
  for (auto& w : report.failures) w.inverse = inverse;
  return report;
}

}  // namespace

CertificationReport certify(const SmoothMap& map, const Ball& region, double epsilon, std::size_t budgetPairs,
                            std::size_t budgetJacobians, std::uint64_t seed, const CertifyOptions& options) {
  return certify_core(map, region, epsilon, budgetPairs, budgetJacobians, seed, options, false);
}

CertificationReport certify_inverse(const SmoothMap& map, const Ball& region, double epsilon, std::size_t budgetPairs,
                                    std::size_t budgetJacobians, std::uint64_t seed, const CertifyOptions& options) {
  return certify_core(map, region, epsilon, budgetPairs, budgetJacobians, seed, options, true);
}

int winding_degree(const SmoothMap& map, const Vec& circleCenter, double radius, std::size_t samples) {
  if (map.dimension() != 2) throw Error(ErrorKind::Precondition, "winding degree is planar only");
  constexpr double kPi = 3.14159265358979323846;
  constexpr std::size_t kMaxSamples = std::size_t{1} << 20;
  const XVec image0 = map.eval_extended(extend(circleCenter));
  auto displacement = [&](double theta) {
    Vec p(2);
    p << circleCenter[0] + radius * std::cos(theta), circleCenter[1] + radius * std::sin(theta);
    return XVec(map.eval_extended(extend(p)) - image0);
  };

  for (std::size_t n = std::max<std::size_t>(samples, 8); n <= kMaxSamples; n *= 2) {
    const double resolution = 2.0 * kPi * radius / static_cast<double>(n);
    std::vector<XVec> pts;
    pts.reserve(n);
    Real minNorm = std::numeric_limits<Real>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back(displacement(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n)));
      minNorm = std::min(minNorm, pts.back().norm());
    }
    if (!(minNorm > Real(10.0 * resolution * 1e-6))) {
      throw Error(ErrorKind::Precondition, "map image of the circle passes too close to the image center",
                  static_cast<double>(minNorm));
    }
    Real total = 0;
    bool resolved = true;
    for (std::size_t i = 0; i < n; ++i) {
      const XVec& a = pts[i];
      const XVec& b = pts[(i + 1) % n];
      const Real step = std::atan2(a[0] * b[1] - a[1] * b[0], a.dot(b));
      if (std::abs(step) >= Real(kPi / 2)) {
        resolved = false;
        break;
      }
      total += step;
    }
    if (resolved) return static_cast<int>(std::lround(static_cast<double>(total) / (2.0 * kPi)));
  }
  throw Error(ErrorKind::Resolution, "angle increments unresolved at maximal refinement");
}

}  // namespace isoextend
