#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isoextend/smooth_map.hpp"

namespace isoextend {

struct Ball {
  Vec center;
  double radius;
};

struct Witness {
  enum class Kind { Pair, Jacobian, Interpolation, Support };
  Kind kind;
  Vec x;
  Vec xPrime;  // pair partner; empty otherwise
  double value;  // ratio, singular value, or residual
  bool inverse = false;  // measured on the inverse map
};

const char* to_string(Witness::Kind kind);

struct CertificationReport {
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::size_t pairSamples = 0;
  std::size_t jacobianSamples = 0;
  std::size_t supportSamples = 0;
  double worstRatioHigh = 1.0;
  double worstRatioLow = 1.0;
  std::pair<double, double> singularValueRange{1.0, 1.0};
  double interpolationResidual = 0.0;
  double supportResidual = 0.0;
  double certifiedEpsilon = 0.0;
  bool pass = true;
  // Extreme witnesses (highest and lowest ratio, largest and smallest
  // singular value); those violating the budget are listed in `failures`.
  std::vector<Witness> extremes;
  std::vector<Witness> failures;
};

struct CertifyOptions {
  std::size_t supportSamples = 1000;
  // Interpolation data: the residual max |map(y_i) - z_i| is reported, and a
  // residual above `interpolationTolerance` fails the verdict.
  std::optional<std::pair<std::vector<Vec>, std::vector<Vec>>> interpolation;
  double interpolationTolerance = 1e-9;
  // Ball outside of which the map must be the identity (defaults to the
  // certification region); residual above `supportTolerance` fails.
  std::optional<Ball> support;
  double supportTolerance = 1e-12;
};

inline constexpr std::size_t kMinCertifySamples = 1000;
inline constexpr double kVerdictSlack = 1e-9;

// Sampling falsifier for the epsilon-distortion of `map` on `region`.
// Deterministic in `seed`; the first n samples of a larger budget are the
// samples of budget n, so larger budgets never lower certifiedEpsilon.
CertificationReport certify(const SmoothMap& map, const Ball& region, double epsilon, std::size_t budgetPairs,
                            std::size_t budgetJacobians, std::uint64_t seed, const CertifyOptions& options = {});

// Same sampling applied to the inverse map (pairs and points are taken in
// the image space; interpolation data is read as (z, y)).
CertificationReport certify_inverse(const SmoothMap& map, const Ball& region, double epsilon, std::size_t budgetPairs,
                                    std::size_t budgetJacobians, std::uint64_t seed, const CertifyOptions& options = {});

// Recomputes a witness's measured value.
double replay_witness(const SmoothMap& map, const Witness& w);

// Pair ratio |map(x) - map(x')| / |x - x'| in extended precision.
double pair_ratio(const SmoothMap& map, const Vec& x, const Vec& xPrime);

// Winding number of theta -> map(c + r e^{i theta}) - map(c); D = 2 only.
int winding_degree(const SmoothMap& map, const Vec& circleCenter, double radius, std::size_t samples = 256);

struct Counterexample {
  PointConfig y;
  PointConfig z;
  Vec largeCenter;       // center of the unit-sphere simplex
  double measuredDelta;  // pairwise distortion of the correspondence
};

// 2D+1 points: a regular simplex on the delta-sphere about the origin whose
// labels 1 and 2 are swapped, sharing its vertex D+1 with a regular simplex
// on a unit sphere that is left fixed.
Counterexample build_counterexample(int dimension, double delta);

struct SimplexSign {
  std::vector<std::size_t> indices;
  double volume;  // of the y-simplex
  int ySign;
  int zSign;
};

struct ObstructionReport {
  bool conflict = false;
  double volumeThreshold = 0.0;
  std::size_t preserving = 0;
  std::size_t reversing = 0;
  std::vector<SimplexSign> simplices;  // voluminous simplices only
};

inline constexpr double kVoluminousFraction = 1e-3;

ObstructionReport orientation_obstruction(const PointConfig& y, const PointConfig& z);

// Orientation degree pair (small simplex, large simplex) of the affine maps
// fitted to the two simplices of a counterexample, via winding_degree. D = 2.
std::pair<int, int> counterexample_degrees(const Counterexample& ce);

}  // namespace isoextend
