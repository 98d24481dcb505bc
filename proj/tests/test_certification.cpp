#include <gtest/gtest.h>

#include <cmath>

#include "isoextend/certification.hpp"
#include "isoextend/diffeo.hpp"
#include "isoextend/errors.hpp"
#include "support.hpp"

using namespace isoextend;
using namespace testing_support;

namespace {

constexpr double kPi = 3.14159265358979323846;

// A slide that is far too steep: translation 1 blended over [1, 2].
SmoothMap steep_slide() {
  return nodes::slide(SlideNode{Vec::Zero(2), Vec::Unit(2, 0), 1.0, 2.0, TransitionProfile{}}, 0.1);
}

SmoothMap feasible_twist() {
  const double r2 = 1.01 * required_radius_ratio(0.4, 0.5);
  return make_slow_twist(factor_rotation(planar_rotation(0.4)), 1.0, r2, 0.5);
}

}  // namespace

TEST(Certify, IdentityAndRotation) {
  const Ball region{Vec::Zero(3), 10.0};
  const auto id = certify(identity_map(3), region, 0.1, 1000, 1000, 1);
  EXPECT_EQ(id.certifiedEpsilon, 0.0);
  EXPECT_TRUE(id.pass);

  std::mt19937_64 rng(1);
  const auto rot = motion_map(EuclideanMotion(random_orthogonal(3, rng), Vec::Zero(3)));
  CertifyOptions opts;
  opts.support = Ball{Vec::Zero(3), std::numeric_limits<double>::infinity()};
  const auto r = certify(rot, region, 0.1, 1000, 1000, 1, opts);
  EXPECT_LE(r.certifiedEpsilon, 1e-12);
  EXPECT_TRUE(r.pass);
}

TEST(Certify, FailureCarriesReplayableWitness) {
  const auto map = steep_slide();
  const auto r = certify(map, Ball{Vec::Zero(2), 4.0}, 0.1, 1000, 1000, 2);
  EXPECT_FALSE(r.pass);
  ASSERT_FALSE(r.failures.empty());
  for (const auto& w : r.failures) {
    const double v = replay_witness(map, w);
    EXPECT_NEAR(v, w.value, 1e-12 * std::max(1.0, std::abs(w.value)));
    if (w.kind == Witness::Kind::Pair) EXPECT_TRUE(v > 1.1 * (1 + 1e-9) || v < 1.0 / (1.1 * (1 + 1e-9)));
  }
  for (const auto& w : r.extremes) EXPECT_NEAR(replay_witness(map, w), w.value, 1e-12 * std::max(1.0, std::abs(w.value)));
  const double expected = std::max({r.worstRatioHigh - 1.0, 1.0 / r.worstRatioLow - 1.0,
                                    r.singularValueRange.second * r.singularValueRange.second - 1.0,
                                    1.0 / (r.singularValueRange.first * r.singularValueRange.first) - 1.0});
  EXPECT_EQ(r.certifiedEpsilon, expected);
}

TEST(Certify, InterpolationAndSupportChecks) {
  const auto map = feasible_twist();
  CertifyOptions opts;
  const Vec y = 0.5 * Vec::Unit(2, 0);
  opts.interpolation = std::make_pair(std::vector<Vec>{y}, std::vector<Vec>{y});
  const auto r = certify(map, Ball{Vec::Zero(2), 1e3}, 0.5, 1000, 1000, 3, opts);
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.interpolationResidual, 0.1);

  const auto unsupported = certify(map, Ball{Vec::Zero(2), 1e3}, 0.5, 1000, 1000, 3);
  EXPECT_FALSE(unsupported.pass);
  EXPECT_GT(unsupported.supportResidual, 0.0);
}

TEST(Certify, TwistPasses) {
  const auto map = feasible_twist();
  const double radius = 2.0 * map.support_radius(Vec::Zero(2));
  const auto r = certify(map, Ball{Vec::Zero(2), radius}, 0.5, 2000, 2000, 4);
  EXPECT_TRUE(r.pass) << r.certifiedEpsilon;
  EXPECT_GT(r.certifiedEpsilon, 0.0);
  const auto inv = certify_inverse(map, Ball{Vec::Zero(2), radius}, 0.5, 2000, 2000, 4);
  EXPECT_TRUE(inv.pass) << inv.certifiedEpsilon;
}

TEST(Certify, DeterministicAndMonotone) {
  const auto map = steep_slide();
  const Ball region{Vec::Zero(2), 4.0};
  const auto a = certify(map, region, 0.1, 1000, 1000, 9);
  const auto b = certify(map, region, 0.1, 1000, 1000, 9);
  EXPECT_EQ(a.certifiedEpsilon, b.certifiedEpsilon);
  EXPECT_EQ(a.worstRatioHigh, b.worstRatioHigh);
  EXPECT_EQ(a.singularValueRange, b.singularValueRange);
  double prev = 0.0;
  for (std::size_t n : {1000u, 2000u, 4000u}) {
    const auto r = certify(map, region, 0.1, n, n, 9);
    EXPECT_GE(r.certifiedEpsilon, prev);
    prev = r.certifiedEpsilon;
  }
}

TEST(WindingDegree, Oracles) {
  EXPECT_EQ(winding_degree(identity_map(2), Vec::Zero(2), 1.0), 1);
  Mat flip = Mat::Identity(2, 2);
  flip(1, 1) = -1.0;
  EXPECT_EQ(winding_degree(motion_map(EuclideanMotion(flip, Vec::Zero(2))), Vec::Zero(2), 1.0), -1);
  EXPECT_EQ(winding_degree(motion_map(EuclideanMotion(planar_rotation(kPi / 3), Vec::Ones(2))), Vec::Ones(2), 0.3), 1);
  EXPECT_EQ(winding_degree(feasible_twist(), Vec::Zero(2), 100.0, 8), 1);
  EXPECT_THROW(winding_degree(identity_map(3), Vec::Zero(3), 1.0), Error);
}

TEST(Counterexample, Fixture) {
  const auto ce = build_counterexample(2, 0.01);
  EXPECT_EQ(ce.y.size(), 5u);
  EXPECT_LE(ce.measuredDelta, 0.05);
  EXPECT_NEAR(pairwise_distortion(ce.y, ce.z).delta, ce.measuredDelta, 0.0);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(ce.y[i].norm(), 0.01, 1e-15);
  for (std::size_t i = 2; i < 5; ++i) EXPECT_NEAR((ce.y[i] - ce.largeCenter).norm(), 1.0, 1e-14);
  for (std::size_t i = 2; i < 5; ++i) EXPECT_EQ(ce.z[i], ce.y[i]);
  // The permutation on the small simplex is a transposition (odd).
  EXPECT_EQ(ce.z[0], ce.y[1]);
  EXPECT_EQ(ce.z[1], ce.y[0]);
  EXPECT_EQ(counterexample_degrees(ce), std::make_pair(-1, 1));
}

TEST(Counterexample, ObstructionVerdicts) {
  for (int d = 2; d <= 4; ++d) {
    const auto ce = build_counterexample(d, 0.01);
    const auto o = orientation_obstruction(ce.y, ce.z);
    EXPECT_TRUE(o.conflict) << d;
    EXPECT_GT(o.preserving, 0u);
    EXPECT_GT(o.reversing, 0u);
  }
  std::mt19937_64 rng(5);
  const auto y = random_config(6, 3, rng);
  const auto proper = orientation_obstruction(y, apply(EuclideanMotion(random_orthogonal(3, rng), gaussian(3, rng)), y));
  EXPECT_FALSE(proper.conflict);
  EXPECT_EQ(proper.reversing, 0u);
  const auto mirror = orientation_obstruction(y, apply(EuclideanMotion(random_orthogonal(3, rng, false), gaussian(3, rng)), y));
  EXPECT_FALSE(mirror.conflict);
  EXPECT_EQ(mirror.preserving, 0u);
  EXPECT_GT(mirror.reversing, 0u);
}

TEST(Counterexample, Preconditions) {
  EXPECT_THROW(build_counterexample(1, 0.01), Error);
  EXPECT_THROW(build_counterexample(2, 0.2), Error);
  EXPECT_THROW(build_counterexample(2, 0.0), Error);
}
